#include "spm/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "spm/error.hpp"

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

namespace spm::io {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw IoError("cannot open " + path + " for writing");
  return f;
}

std::ifstream open_in(const std::string& path, bool binary) {
  std::ifstream f(path, binary ? std::ios::binary : std::ios::in);
  if (!f) throw IoError("cannot open " + path);
  return f;
}

void put_u32(std::ostream& o, std::uint32_t v) { o.write(reinterpret_cast<const char*>(&v), sizeof v); }

std::uint32_t get_u32(std::istream& in, const std::string& path) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw IoError(path + ": truncated header");
  return v;
}

void expect_magic(std::istream& in, const char* magic, const std::string& path) {
  char buf[4] = {};
  if (!in.read(buf, 4) || std::memcmp(buf, magic, 4) != 0) throw IoError(path + ": bad magic, expected " + magic);
}

std::vector<double> get_doubles(std::istream& in, std::size_t count, const std::string& path) {
  std::vector<double> v(count);
  if (!in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * sizeof(double))))
    throw IoError(path + ": truncated payload");
  if (in.peek() != std::char_traits<char>::eof()) throw IoError(path + ": trailing bytes");
  return v;
}

bool is_text(const std::string& path) {
  auto ends = [&](const char* ext) {
    const std::size_t n = std::strlen(ext);
    return path.size() >= n && path.compare(path.size() - n, n, ext) == 0;
  };
  return ends(".csv") || ends(".txt");
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j.at(i).size()) != cols) throw IoError("ragged matrix in JSON");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = j.at(i).at(k).get<double>();
  }
  return m;
}

}  // namespace

void write_tensor(const std::string& path, const SymTensor& t) {
  auto f = open_out(path, true);
  f.write("STF1", 4);
  put_u32(f, static_cast<std::uint32_t>(t.order()));
  put_u32(f, static_cast<std::uint32_t>(t.length()));
  f.write(reinterpret_cast<const char*>(t.data().data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
  if (!f) throw IoError("write failed: " + path);
}

SymTensor read_tensor(const std::string& path) {
  auto f = open_in(path, true);
  expect_magic(f, "STF1", path);
  const auto order = get_u32(f, path), length = get_u32(f, path);
  if (length == 0 || order > 16) throw IoError(path + ": implausible shape");
  std::size_t count = 1;
  for (std::uint32_t i = 0; i < order; ++i) count *= length;
  try {
    return SymTensor::from_data(static_cast<int>(order), static_cast<int>(length), get_doubles(f, count, path));
  } catch (const DimensionError& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_points(const std::string& path, const PointCloud& cloud) {
  auto f = open_out(path, true);
  f.write("PTS1", 4);
  put_u32(f, static_cast<std::uint32_t>(cloud.size()));
  put_u32(f, static_cast<std::uint32_t>(cloud.length()));
  // column-major L x N is exactly point-major storage
  f.write(reinterpret_cast<const char*>(cloud.points.data()),
          static_cast<std::streamsize>(cloud.points.size() * sizeof(double)));
  if (!f) throw IoError("write failed: " + path);
}

PointCloud read_points(const std::string& path) {
  auto f = open_in(path, true);
  expect_magic(f, "PTS1", path);
  const auto n = get_u32(f, path), length = get_u32(f, path);
  if (n == 0 || length == 0) throw IoError(path + ": empty point cloud");
  const auto v = get_doubles(f, static_cast<std::size_t>(n) * length, path);
  PointCloud c;
  c.points = Eigen::Map<const Matrix>(v.data(), length, n);
  return c;
}

void write_points_csv(const std::string& path, const PointCloud& cloud) {
  auto f = open_out(path, false);
  f.precision(17);
  for (int p = 0; p < cloud.size(); ++p) {
    for (int i = 0; i < cloud.length(); ++i) f << (i ? "," : "") << cloud.points(i, p);
    f << '\n';
  }
}

PointCloud read_points_csv(const std::string& path) {
  auto f = open_in(path, false);
  std::vector<double> values;
  std::size_t width = 0, rows = 0;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t count = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw IoError(path + ": bad number '" + cell + "' on row " + std::to_string(rows + 1));
      }
      ++count;
    }
    if (rows == 0) width = count;
    if (count != width) throw IoError(path + ": row " + std::to_string(rows + 1) + " has a different width");
    ++rows;
  }
  if (rows == 0 || width == 0) throw IoError(path + ": no points");
  PointCloud c;
  c.points = Eigen::Map<const Matrix>(values.data(), static_cast<Eigen::Index>(width), static_cast<Eigen::Index>(rows));
  return c;
}

PointCloud read_points_any(const std::string& path) { return is_text(path) ? read_points_csv(path) : read_points(path); }

void write_labels_csv(const std::string& path, const std::vector<int>& labels) {
  auto f = open_out(path, false);
  f << "label\n";
  for (int l : labels) f << l << '\n';
}

json to_json(const CPDecomposition& d) {
  json comps = json::array();
  for (const auto& c : d.components) {
    comps.push_back({{"lambda", c.weight}, {"a", std::vector<double>(c.vector.data(), c.vector.data() + c.vector.size())}});
  }
  return {{"rank", d.components.size()}, {"components", comps}};
}

json to_json(const BlockTermDecomposition& d) {
  json blocks = json::array();
  for (const auto& b : d.blocks) {
    blocks.push_back({{"ell", b.factor.cols()},
                      {"A", matrix_json(b.factor)},
                      {"core", std::vector<double>(b.core.data().begin(), b.core.data().end())}});
  }
  return {{"order", d.order}, {"length", d.length}, {"blocks", blocks}};
}

json to_json(const SubspaceArrangement& a) {
  json out = json::array();
  for (const auto& b : a.bases) out.push_back({{"dim", b.cols()}, {"basis", matrix_json(b)}});
  return out;
}

CPDecomposition cp_from_json(const json& j) {
  try {
    CPDecomposition d;
    for (const auto& c : j.at("components")) {
      const auto a = c.at("a").get<std::vector<double>>();
      d.components.push_back({c.at("lambda").get<double>(), Eigen::Map<const Vector>(a.data(), static_cast<Eigen::Index>(a.size()))});
    }
    return d;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed CP JSON: ") + e.what());
  }
}

BlockTermDecomposition btd_from_json(const json& j) {
  try {
    BlockTermDecomposition d;
    d.order = j.at("order").get<int>();
    d.length = j.at("length").get<int>();
    for (const auto& b : j.at("blocks")) {
      Matrix a = matrix_from_json(b.at("A"));
      const int ell = b.at("ell").get<int>();
      if (a.cols() != ell || a.rows() != d.length) throw IoError("block factor shape does not match");
      d.blocks.push_back({std::move(a), SymTensor::from_data(d.order, ell, b.at("core").get<std::vector<double>>())});
    }
    return d;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed block JSON: ") + e.what());
  } catch (const DimensionError& e) {
    throw IoError(std::string("malformed block JSON: ") + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  auto f = open_out(path, false);
  f << j.dump(2) << '\n';
  if (!f) throw IoError("write failed: " + path);
}

json read_json(const std::string& path) {
  auto f = open_in(path, false);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

}  // namespace spm::io
