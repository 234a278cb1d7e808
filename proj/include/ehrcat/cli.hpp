#ifndef EHRCAT_CLI_HPP
#define EHRCAT_CLI_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace ehrcat::cli {

/// Writing an output file failed.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Column-oriented numeric table written as one CSV file.
struct Table {
  std::string name; // file stem
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// `# ehrcat <version> k=v ...`, the header row, then rows at 17
/// significant digits.
std::string to_csv(const Table& t);
void write_csv(const Table& t, const std::filesystem::path& file);

/// Shortest round-trip text of x.
std::string format_number(double x);

/// $EHRCAT_OUTPUT_DIR when set, else the working directory.
std::filesystem::path default_output_dir();

/// Panel ids: 2a..2d, 3a..3d, 4a..4d, 5a, 5b, 6a..6d, 7a..7d, 8a, 8b, 9a,
/// 9b, 10a, 10b.
std::vector<std::string> figure_ids();

/// Tables for one id. "10" expands to both panels of figure 10.
std::vector<Table> figure(const std::string& id);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Suites: specfun, chain, diffusion, mc, all. `tol` bounds the
/// deterministic comparisons; MC checks use 4 standard errors.
std::vector<CheckResult> validate(const std::string& suite, double tol);

/// Full command line without the program name. Returns the exit status:
/// 0 ok, 2 bad parameters, 3 numerical failure, 4 I/O failure.
int run(const std::vector<std::string>& args);

} // namespace ehrcat::cli

#endif // EHRCAT_CLI_HPP
