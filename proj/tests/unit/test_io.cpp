#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "l1pt/errors.hpp"
#include "l1pt/experiment_harness.hpp"

using namespace l1pt;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("l1pt_test_" + name);
}

std::size_t parse_error_line(const std::string& text, bool diagram) {
  std::istringstream in(text);
  try {
    if (diagram) {
      import_diagram_csv(in);
    } else {
      import_curve_csv(in);
    }
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(CurveCsv, RoundTripIsIdentity) {
  ThresholdCurve c;
  c.tolerance = Tolerance{3e-13, 7e-15, 123};
  c.points = {{0.1, 0.018942936775967381, Method::Geometric, -1.2e-17},
              {0.5, 0.19284483309074044, Method::Fundamental, 1.1102230246251565e-16},
              {0.9, 0.61035244032104941, Method::AmpStateEvolution, 0.0}};
  std::stringstream buf;
  export_csv(c, buf, {"note"});
  const auto back = import_curve_csv(buf);
  ASSERT_EQ(back.points.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.points[i].alpha, c.points[i].alpha);
    EXPECT_EQ(back.points[i].beta_w, c.points[i].beta_w);
    EXPECT_EQ(back.points[i].method, c.points[i].method);
    EXPECT_EQ(back.points[i].residual, c.points[i].residual);
  }
  EXPECT_EQ(back.tolerance.abs_tol, 3e-13);
  EXPECT_EQ(back.tolerance.rel_tol, 7e-15);
  EXPECT_EQ(back.tolerance.max_iter, 123);
}

TEST(CurveCsv, ComputedCurveSurvivesFile) {
  const auto c = compute_curve(Method::Fundamental, {0.2, 0.4, 0.6, 0.8});
  const auto path = temp_file("curve.csv");
  export_csv(c, path);
  const auto back = import_curve_csv(path);
  ASSERT_EQ(back.points.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(back.points[i].beta_w, c.points[i].beta_w);
  std::filesystem::remove(path);
}

TEST(DiagramCsv, EmptyDiagramIsHeaderOnly) {
  PhaseDiagram d;
  std::stringstream buf;
  export_csv(d, buf);
  EXPECT_EQ(buf.str(), "alpha,beta,n,trials,successes,mean_rel_error,solver,seed\n");
  const auto back = import_diagram_csv(buf);
  EXPECT_TRUE(back.cells.empty());
}

TEST(DiagramCsv, RandomCellsRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PhaseDiagram d;
  d.solver = SolverKind::Amp;
  d.n = 321;
  d.master_seed = 18446744073709551557ULL;
  for (int i = 0; i < 25; ++i) {
    PhaseCell c;
    c.alpha = u(rng);
    c.beta = u(rng) * c.alpha;
    c.n = d.n;
    c.trials = 1 + i;
    c.successes = i / 2;
    c.mean_rel_error = i == 3 ? std::numeric_limits<double>::quiet_NaN() : std::ldexp(u(rng), -i);
    d.cells.push_back(c);
  }
  std::stringstream buf;
  export_csv(d, buf, {"l1pt 9.9.9 phase --n 321"});
  const auto back = import_diagram_csv(buf);
  EXPECT_EQ(back.solver, d.solver);
  EXPECT_EQ(back.n, d.n);
  EXPECT_EQ(back.master_seed, d.master_seed);
  EXPECT_EQ(back.tool_version, "9.9.9");
  ASSERT_EQ(back.cells.size(), 25u);
  for (std::size_t i = 0; i < 25; ++i) {
    const auto& a = d.cells[i];
    const auto& b = back.cells[i];
    EXPECT_EQ(a.alpha, b.alpha);
    EXPECT_EQ(a.beta, b.beta);
    EXPECT_EQ(a.trials, b.trials);
    EXPECT_EQ(a.successes, b.successes);
    if (std::isnan(a.mean_rel_error)) {
      EXPECT_TRUE(std::isnan(b.mean_rel_error));
    } else {
      EXPECT_EQ(a.mean_rel_error, b.mean_rel_error);
    }
  }
}

TEST(DiagramCsv, EstimatedGridRoundTrips) {
  EnsembleSpec base;
  base.n = 100;
  base.master_seed = 17;
  const std::vector<double> alphas = {0.2, 0.35, 0.5, 0.65, 0.8};
  const std::vector<double> betas = {0.0, 0.02, 0.05, 0.1, 0.15};
  const auto d = estimate_phase_diagram(alphas, betas, base, SolverKind::BasisPursuit, 50);
  ASSERT_EQ(d.cells.size(), 25u);
  std::stringstream first;
  export_csv(d, first);
  const auto back = import_diagram_csv(first);
  std::stringstream second;
  export_csv(back, second);
  EXPECT_EQ(first.str(), second.str());
}

TEST(Csv, ParseErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("", false), 1u);
  EXPECT_EQ(parse_error_line("alpha,beta\n", false), 1u);
  EXPECT_EQ(parse_error_line("# c\nalpha,beta_w,method,residual\n0.5,0.19,fundamental,0\n0.6,x,fundamental,0\n", false), 4u);
  EXPECT_EQ(parse_error_line("alpha,beta_w,method,residual\n0.5,0.19,fundamental\n", false), 2u);
  EXPECT_EQ(parse_error_line("alpha,beta_w,method,residual\n0.5,0.19,magic,0\n", false), 2u);
  const std::string h = "alpha,beta,n,trials,successes,mean_rel_error,solver,seed\n";
  EXPECT_EQ(parse_error_line(h + "0.5,0.1,100,10,11,0,bp,1\n", true), 2u);
  EXPECT_EQ(parse_error_line(h + "0.5,0.1,100,10,1,0,bp,1\n0.5,0.2,100,10,1,0,amp,1\n", true), 3u);
  EXPECT_EQ(parse_error_line(h + "\n\n0.5,0.1,100,10,1,0,bp,-1\n", true), 4u);
}

TEST(Csv, UnwritablePathThrows) {
  EXPECT_THROW(export_csv(PhaseDiagram{}, std::filesystem::path("/nonexistent/dir/x.csv")), Error);
  EXPECT_THROW(import_curve_csv(std::filesystem::path("/nonexistent/x.csv")), Error);
}

TEST(InstanceJson, RoundTrip) {
  const auto inst = sample_planted(12, 6, 2, NonzeroLaw::StandardNormal, 99);
  const auto back = instance_from_json(instance_to_json(inst));
  EXPECT_EQ(back.matrix, inst.matrix);
  EXPECT_EQ(back.measurements, inst.measurements);
  EXPECT_EQ(*back.truth, *inst.truth);
  EXPECT_EQ(back.sparsity, 2);
  EXPECT_EQ(back.seed, 99u);

  const auto path = temp_file("instance.json");
  write_instance(inst, path);
  EXPECT_EQ(read_instance(path).matrix, inst.matrix);
  std::filesystem::remove(path);
}

TEST(InstanceJson, FieldsAndFlatMatrix) {
  const auto inst = sample_planted(4, 2, 1, NonzeroLaw::Rademacher, 3);
  const std::string text = instance_to_json(inst);
  for (const char* f : {"\"n\"", "\"m\"", "\"k\"", "\"seed\"", "\"matrix\"", "\"y\"", "\"x_true\"", "\"support\"", "\"signs\""}) {
    EXPECT_NE(text.find(f), std::string::npos) << f;
  }
  const auto flat = instance_from_json(R"({"n":2,"m":1,"matrix":[3,4],"y":[5]})");
  EXPECT_EQ(flat.matrix(0, 1), 4.0);
  EXPECT_FALSE(flat.truth.has_value());
}

TEST(InstanceJson, Malformed) {
  try {
    instance_from_json("{\n\"n\": 2,\n\"m\": ,\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(instance_from_json(R"({"n":2,"m":1,"y":[5]})"), ParseError);
  EXPECT_THROW(instance_from_json(R"({"n":2,"m":1,"matrix":[3],"y":[5]})"), ParseError);
  EXPECT_THROW(instance_from_json(R"({"n":2,"m":1,"matrix":[3,4],"y":[5],"x_true":[1,0]})"), ParseError);
}
