#include "skdv/csv.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace skdv {

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns, std::string config_hash)
    : out_(path, std::ios::binary | std::ios::trunc), columns_(std::move(columns)), hash_(std::move(config_hash)) {
  if (!out_) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
  out_ << '\n';
}

CsvWriter::~CsvWriter() {
  try {
    finish();
  } catch (...) {
  }
}

void CsvWriter::row(std::initializer_list<double> values) { row(std::vector<double>(values)); }

void CsvWriter::row(const std::vector<double>& values) {
  if (finished_) throw std::logic_error("csv row after finish");
  if (values.size() != columns_.size()) throw std::invalid_argument("csv row width does not match the header");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
  out_ << '\n';
  ++rows_;
}

void CsvWriter::finish() {
  if (finished_) return;
  finished_ = true;
  out_ << "# config_hash=" << hash_ << '\n';
  out_.close();
  if (out_.fail()) throw std::runtime_error("csv write failed");
}

}  // namespace skdv
