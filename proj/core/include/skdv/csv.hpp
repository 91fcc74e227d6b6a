#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace skdv {

// Shortest representation that parses back to the same double.
std::string format_double(double x);

// Writes a header, rows of numbers, and a trailing "# config_hash=<hex>" line.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns, std::string config_hash);
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;
  ~CsvWriter();

  void row(std::initializer_list<double> values);
  void row(const std::vector<double>& values);
  // Appends the hash trailer and closes; further rows are errors.
  void finish();

  std::size_t columns() const { return columns_.size(); }
  std::size_t rows() const { return rows_; }

 private:
  std::ofstream out_;
  std::vector<std::string> columns_;
  std::string hash_;
  std::size_t rows_ = 0;
  bool finished_ = false;
};

namespace csv_schema {
inline const std::vector<std::string> invariants{"t", "mass", "q", "energy", "u_h1", "v_h1", "margin"};
inline const std::vector<std::string> virial{"t", "J2", "J3", "res_prop2", "res_prop3", "res_combined"};
inline const std::vector<std::string> decay{"t",          "window_p",     "window_m",   "E_mixed",    "E_coupling",
                                            "E_gradu",    "E_gradv",      "E_uk",       "E_vk",       "acc_mixed",
                                            "acc_coupling", "acc_gradu", "acc_gradv", "acc_quartic"};
inline const std::vector<std::string> moments{"t", "B", "Umom", "F", "predicted_slope"};
inline const std::vector<std::string> flags{"t", "boundary_mass", "blowup", "window_clipped"};
}  // namespace csv_schema

}  // namespace skdv
