#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "l1pt/errors.hpp"
#include "l1pt/experiment_harness.hpp"

namespace l1pt {

namespace {

constexpr std::string_view kCurveHeader = "alpha,beta_w,method,residual";
constexpr std::string_view kDiagramHeader =
    "alpha,beta,n,trials,successes,mean_rel_error,solver,seed";

void write_comments(std::ostream& out, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
T parse_number(std::string_view field, std::string_view column, std::size_t line) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw ParseError(fmt::format("line {}: bad {} value '{}'", line, column, field), line);
  }
  return value;
}

// Reads the stream line by line, skipping blanks and '#' comments; the first
// remaining line must equal `header`.
class CsvReader {
 public:
  CsvReader(std::istream& in, std::string_view header) : in_(in) {
    std::string_view row;
    if (!next(row)) throw ParseError(fmt::format("missing header '{}'", header), line_ ? line_ : 1);
    if (row != header) {
      throw ParseError(fmt::format("line {}: expected header '{}', got '{}'", line_, header, row),
                       line_);
    }
  }

  bool next(std::string_view& row) {
    while (std::getline(in_, buf_)) {
      ++line_;
      if (!buf_.empty() && buf_.back() == '\r') buf_.pop_back();
      if (buf_.empty()) continue;
      if (buf_.front() == '#') {
        comments_.push_back(buf_.substr(buf_.size() > 1 && buf_[1] == ' ' ? 2 : 1));
        continue;
      }
      row = buf_;
      return true;
    }
    return false;
  }

  std::vector<std::string_view> fields(std::string_view row, std::size_t expected) const {
    auto f = split(row);
    if (f.size() != expected) {
      throw ParseError(
          fmt::format("line {}: expected {} fields, got {}", line_, expected, f.size()), line_);
    }
    return f;
  }

  std::size_t line() const { return line_; }
  const std::vector<std::string>& comments() const { return comments_; }

 private:
  std::istream& in_;
  std::string buf_;
  std::size_t line_ = 0;
  std::vector<std::string> comments_;
};

std::string tolerance_comment(const Tolerance& tol) {
  return fmt::format("tolerance abs_tol={:.17g} rel_tol={:.17g} max_iter={}", tol.abs_tol,
                     tol.rel_tol, tol.max_iter);
}

void apply_tolerance_comment(const std::string& comment, Tolerance& tol) {
  if (comment.rfind("tolerance ", 0) != 0) return;
  std::istringstream ss(comment.substr(10));
  std::string kv;
  while (ss >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    const std::string_view key(kv.data(), eq);
    const std::string_view val(kv.data() + eq + 1, kv.size() - eq - 1);
    if (key == "abs_tol") tol.abs_tol = parse_number<double>(val, key, 0);
    if (key == "rel_tol") tol.rel_tol = parse_number<double>(val, key, 0);
    if (key == "max_iter") tol.max_iter = parse_number<int>(val, key, 0);
  }
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot open '{}' for writing", path.string()));
  writer(out);
  out.flush();
  if (!out) throw Error(fmt::format("write to '{}' failed", path.string()));
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}' for reading", path.string()));
  return in;
}

}  // namespace

void export_csv(const ThresholdCurve& curve, std::ostream& out,
                const std::vector<std::string>& comments) {
  write_comments(out, comments);
  out << "# " << tolerance_comment(curve.tolerance) << '\n';
  out << kCurveHeader << '\n';
  for (const auto& p : curve.points) {
    fmt::print(out, "{:.17g},{:.17g},{},{:.17g}\n", p.alpha, p.beta_w, to_string(p.method),
               p.residual);
  }
}

void export_csv(const PhaseDiagram& diagram, std::ostream& out,
                const std::vector<std::string>& comments) {
  write_comments(out, comments);
  out << kDiagramHeader << '\n';
  for (const auto& c : diagram.cells) {
    fmt::print(out, "{:.17g},{:.17g},{},{},{},{:.17g},{},{}\n", c.alpha, c.beta, c.n, c.trials,
               c.successes, c.mean_rel_error, to_string(diagram.solver), diagram.master_seed);
  }
}

void export_csv(const ThresholdCurve& curve, const std::filesystem::path& path,
                const std::vector<std::string>& comments) {
  write_file(path, [&](std::ostream& out) { export_csv(curve, out, comments); });
}

void export_csv(const PhaseDiagram& diagram, const std::filesystem::path& path,
                const std::vector<std::string>& comments) {
  write_file(path, [&](std::ostream& out) { export_csv(diagram, out, comments); });
}

ThresholdCurve import_curve_csv(std::istream& in) {
  CsvReader reader(in, kCurveHeader);
  ThresholdCurve curve;
  std::string_view row;
  while (reader.next(row)) {
    const auto f = reader.fields(row, 4);
    ThresholdPoint p;
    p.alpha = parse_number<double>(f[0], "alpha", reader.line());
    p.beta_w = parse_number<double>(f[1], "beta_w", reader.line());
    try {
      p.method = method_from_string(f[2]);
    } catch (const DomainError&) {
      throw ParseError(fmt::format("line {}: unknown method '{}'", reader.line(), f[2]),
                       reader.line());
    }
    p.residual = parse_number<double>(f[3], "residual", reader.line());
    curve.points.push_back(p);
  }
  for (const auto& c : reader.comments()) apply_tolerance_comment(c, curve.tolerance);
  return curve;
}

PhaseDiagram import_diagram_csv(std::istream& in) {
  CsvReader reader(in, kDiagramHeader);
  PhaseDiagram diagram;
  std::string_view row;
  bool first = true;
  while (reader.next(row)) {
    const auto f = reader.fields(row, 8);
    const std::size_t line = reader.line();
    PhaseCell c;
    c.alpha = parse_number<double>(f[0], "alpha", line);
    c.beta = parse_number<double>(f[1], "beta", line);
    c.n = parse_number<int>(f[2], "n", line);
    c.trials = parse_number<int>(f[3], "trials", line);
    c.successes = parse_number<int>(f[4], "successes", line);
    c.mean_rel_error = parse_number<double>(f[5], "mean_rel_error", line);
    if (c.successes < 0 || c.successes > c.trials) {
      throw ParseError(fmt::format("line {}: successes {} outside [0, {}]", line, c.successes,
                                   c.trials),
                       line);
    }
    SolverKind solver;
    try {
      solver = solver_from_string(f[6]);
    } catch (const DomainError&) {
      throw ParseError(fmt::format("line {}: unknown solver '{}'", line, f[6]), line);
    }
    const auto seed = parse_number<std::uint64_t>(f[7], "seed", line);
    if (first) {
      diagram.solver = solver;
      diagram.n = c.n;
      diagram.master_seed = seed;
      first = false;
    } else if (solver != diagram.solver || c.n != diagram.n || seed != diagram.master_seed) {
      throw ParseError(fmt::format("line {}: solver, n and seed must match the first row", line),
                       line);
    }
    diagram.cells.push_back(c);
  }
  for (const auto& c : reader.comments()) {
    if (c.rfind("l1pt ", 0) == 0) {
      std::istringstream ss(c.substr(5));
      ss >> diagram.tool_version;
      break;
    }
  }
  return diagram;
}

ThresholdCurve import_curve_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return import_curve_csv(in);
}

PhaseDiagram import_diagram_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return import_diagram_csv(in);
}

}  // namespace l1pt
