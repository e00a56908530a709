#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mie::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kNumericalError = 3 };

struct RunConfig {
  std::string command;
  std::string oracle_target = "area";  // area | derivs | mi, for `oracle`
  std::string body = "fig1";           // built-in name or JSON path
  std::string ellipse;                 // JSON; the unit disk when empty
  double lambda = 0.0;                 // 0: midpoint of [area John, area Loewner]
  int steps = 9;
  double tol = 1e-7;
  std::uint64_t seed = 1;
  std::string out;  // stdout when empty
  int digits = 17;
  std::string method = "analytic";  // analytic | mc | clip | grid | fd
  std::uint64_t samples = 1000000;
  int grid = 41;
  double t_span = 2.0;
  double t_min = -2.0;
  double t_max = 2.0;
  bool check_position = false;
  bool show_config = false;
};

// Parses argv (without the program name) and runs the command. Diagnostics
// go to err as one line; results go to out, or to --out when given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace mie::cli
