#include "aniso/sample_io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "aniso/errors.hpp"

namespace aniso {

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (auto& f : out) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
  }
  return out;
}

double parse_number(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument("line " + std::to_string(line_no) + ": cannot parse '" +
                          std::string(field) + "' as a number");
  }
  return v;
}

}  // namespace

void write_sample_csv(std::ostream& os, const SpatialSample& sample) {
  os << "x,y,z\n";
  char buf[96];
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(sample.size()); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", sample.locations()(j, 0),
                  sample.locations()(j, 1), sample.values()(j));
    os << buf;
  }
}

void write_sample_csv(const std::filesystem::path& path, const SpatialSample& sample) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_sample_csv(os, sample);
  os.flush();
  if (!os) throw IoError("write failed for " + path.string());
}

SpatialSample read_sample_csv(std::istream& is, double lambda) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(is, line)) {
    if (is.bad()) throw IoError("read error in sample file");
    throw InvalidArgument("sample file is empty (header x,y,z required)");
  }
  ++line_no;
  const auto header = split_csv(line);
  std::array<int, 3> col{-1, -1, -1};
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "x") col[0] = static_cast<int>(i);
    if (header[i] == "y") col[1] = static_cast<int>(i);
    if (header[i] == "z") col[2] = static_cast<int>(i);
  }
  if (col[0] < 0 || col[1] < 0 || col[2] < 0) {
    throw InvalidArgument("sample header must name columns x, y and z");
  }

  std::vector<std::array<double, 3>> rows;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv(line);
    std::array<double, 3> row{};
    for (int c = 0; c < 3; ++c) {
      if (static_cast<std::size_t>(col[c]) >= fields.size()) {
        throw InvalidArgument("line " + std::to_string(line_no) + ": missing column");
      }
      row[c] = parse_number(fields[col[c]], line_no);
    }
    rows.push_back(row);
  }
  if (is.bad()) throw IoError("read error in sample file");

  Locations locs(static_cast<Eigen::Index>(rows.size()), 2);
  Eigen::VectorXd z(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    locs(jj, 0) = rows[j][0];
    locs(jj, 1) = rows[j][1];
    z(jj) = rows[j][2];
  }
  return SpatialSample(lambda, std::move(locs), std::move(z));
}

SpatialSample read_sample_csv(const std::filesystem::path& path, double lambda) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return read_sample_csv(is, lambda);
}

}  // namespace aniso
