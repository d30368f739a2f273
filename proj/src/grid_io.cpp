#include "expsum/grid_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "expsum/errors.hpp"

namespace expsum {

namespace {

constexpr char kMagic[8] = {'E', 'X', 'P', 'S', 'G', 'R', 'D', '1'};

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ParseError("truncated binary grid");
  return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void write_grid_csv(const SumGrid& grid, std::ostream& out) {
  for (std::size_t i = 0; i < grid.n(); ++i) out << "h" << i + 1 << ",";
  out << "re,im,abs\n";
  std::vector<std::uint32_t> h(grid.n());
  for (std::uint64_t idx = 0; idx < grid.size(); ++idx) {
    grid.point_of(idx, h.data());
    for (auto v : h) out << v << ",";
    const auto z = grid.value(idx);
    out << fmt17(z.real()) << "," << fmt17(z.imag()) << "," << fmt17(std::abs(z)) << "\n";
  }
}

SumGrid read_grid_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty grid CSV");
  std::size_t n = 0;
  {
    std::stringstream ss(line);
    std::string col;
    std::vector<std::string> cols;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    if (cols.size() < 3 || cols[cols.size() - 3] != "re" || cols[cols.size() - 2] != "im" || cols.back() != "abs") {
      throw ParseError("grid CSV header must end with re,im,abs");
    }
    n = cols.size() - 3;
    for (std::size_t i = 0; i < n; ++i) {
      if (cols[i] != "h" + std::to_string(i + 1)) throw ParseError("unexpected grid CSV column " + cols[i]);
    }
  }
  std::vector<std::vector<std::uint32_t>> hs;
  std::vector<std::complex<double>> vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != n + 3) throw ParseError("grid CSV row has the wrong number of columns");
    std::vector<std::uint32_t> h(n);
    try {
      for (std::size_t i = 0; i < n; ++i) h[i] = static_cast<std::uint32_t>(std::stoul(cells[i]));
      vals.emplace_back(std::stod(cells[n]), std::stod(cells[n + 1]));
    } catch (const std::exception&) {
      throw ParseError("malformed number in grid CSV");
    }
    hs.push_back(std::move(h));
  }
  std::uint32_t p = 1;
  if (n == 0) {
    if (vals.size() != 1) throw ParseError("zero-dimensional grid must have one row");
  } else {
    p = static_cast<std::uint32_t>(std::llround(std::pow(static_cast<double>(vals.size()), 1.0 / n)));
  }
  if (n > 0 && !is_prime(p)) throw ParseError("grid CSV row count is not a prime power");
  SumGrid grid(n == 0 ? 2 : p, n, false);
  if (grid.size() != vals.size()) throw ParseError("grid CSV row count is not a perfect power");
  for (std::size_t r = 0; r < vals.size(); ++r) {
    for (auto v : hs[r]) {
      if (v >= grid.p()) throw ParseError("grid CSV coordinate out of range");
    }
    grid.values()[grid.index_of(hs[r])] = vals[r];
  }
  return grid;
}

void write_grid_binary(const SumGrid& grid, std::ostream& out) {
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, grid.p());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.n()));
  put<std::uint32_t>(out, grid.exact() ? 1 : 0);
  if (grid.exact()) {
    for (auto c : grid.counts()) put<std::int64_t>(out, c);
  } else {
    for (const auto& z : grid.values()) {
      put<double>(out, z.real());
      put<double>(out, z.imag());
    }
  }
}

SumGrid read_grid_binary(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw ParseError("not a binary grid file (bad magic)");
  }
  const auto p = get<std::uint32_t>(in);
  const auto n = get<std::uint32_t>(in);
  const auto kind = get<std::uint32_t>(in);
  if (kind > 1) throw ParseError("unknown binary grid value kind");
  if (!is_prime(p) || checked_grid_size(p, n, std::uint64_t{1} << 32) == 0) throw ParseError("bad grid header");
  SumGrid grid(p, n, kind == 1);
  if (grid.exact()) {
    for (auto& c : grid.counts()) c = get<std::int64_t>(in);
    for (std::uint64_t i = 0; i < grid.size(); ++i) grid.values()[i] = grid.cyclo(i).to_complex();
  } else {
    for (auto& z : grid.values()) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      z = {re, im};
    }
  }
  return grid;
}

void save_grid(const SumGrid& grid, const std::string& path) {
  const bool csv = ends_with(path, ".csv");
  std::ofstream out(path, csv ? std::ios::out : std::ios::out | std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  if (csv) {
    write_grid_csv(grid, out);
  } else {
    write_grid_binary(grid, out);
  }
}

SumGrid load_grid(const std::string& path) {
  const bool csv = ends_with(path, ".csv");
  std::ifstream in(path, csv ? std::ios::in : std::ios::in | std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return csv ? read_grid_csv(in) : read_grid_binary(in);
}

}  // namespace expsum
