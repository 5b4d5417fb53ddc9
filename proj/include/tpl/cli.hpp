#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tpl/numerics.hpp"

namespace tpl::cli {

/// One parsed invocation. Inputs are file paths or inline generators
/// (see README); nothing is read until run().
struct Request {
  std::string command;  // analyze | idempotent | dilate | concentration | hankel | sinc | selftest

  std::string input_p;
  std::string input_q;
  bool frame = false;  // inputs are orthonormal frames rather than projections

  std::string b;
  std::string gamma;

  Index n = 0;
  std::string set_i;
  std::string set_j;
  std::string symbol_phi;
  std::string symbol_psi;
  Index section = 0;

  std::string n_list;
  std::optional<double> length;
  std::optional<double> step;

  TolerancePolicy tol;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  std::string out;  // empty: standard output
};

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;

/// Parses argv with CLI11. On --help or a parse error writes to out/err and
/// returns the exit code through `exit_code`.
std::optional<Request> parse(int argc, const char* const* argv, std::ostream& out,
                             std::ostream& err, int& exit_code);

/// Executes the request and writes the report. Exit 0 on success, 1 on input
/// errors, 2 when a numerical cross-check fails (the report is still written).
int run(const Request& request, std::ostream& out, std::ostream& err);

/// Seed from the request, else TPL_SEED, else 42.
std::uint64_t resolve_seed(const Request& request);

/// Matrix from a JSON object {"rows", "cols", "re", "im"}, a bare JSON array of
/// rows, or CSV with cells like 1, -2.5, 1+2i, 3-0.5i, 2i.
ComplexMatrix parse_matrix(const std::string& text);
ComplexMatrix read_matrix(const std::string& path);

/// Index sets: "lo:hi" (half-open), single indices and comma-separated unions,
/// e.g. "0:4,8,10:12". Checked against [0, n).
std::vector<Index> parse_index_set(const std::string& text, Index n);

/// Complex cell in CSV syntax.
Complex parse_complex(const std::string& cell);

int main(int argc, const char* const* argv);

}  // namespace tpl::cli
