#ifndef L1PT_CLI_HPP
#define L1PT_CLI_HPP

#include <iosfwd>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace l1pt::cli {

/// Bad flag value; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "start:stop:step" (inclusive) or "a,b,c". Values are rounded to 1e-12.
std::vector<double> parse_grid(std::string_view text);

/// Locale-independent; the whole string must be consumed.
double parse_real(std::string_view flag, std::string_view text);

/// Exit codes: 0 success, 1 runtime failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace l1pt::cli

#endif  // L1PT_CLI_HPP
