#pragma once

// Grid export formats.
//
// CSV: header "h1,...,hn,re,im,abs", one row per h in row-major order, values
// printed with 17 significant digits. Reading recovers p from the row count.
//
// Binary (little-endian): 8-byte magic "EXPSGRD1", uint32 p, uint32 n,
// uint32 kind (0 = complex doubles re/im, 1 = exact, p int64 counts per
// entry), then the entries in row-major order.

#include <iosfwd>
#include <string>

#include "expsum/sum_engine.hpp"

namespace expsum {

void write_grid_csv(const SumGrid& grid, std::ostream& out);
SumGrid read_grid_csv(std::istream& in);
void write_grid_binary(const SumGrid& grid, std::ostream& out);
SumGrid read_grid_binary(std::istream& in);

void save_grid(const SumGrid& grid, const std::string& path);  // format from the extension (.csv or other)
SumGrid load_grid(const std::string& path);

}  // namespace expsum
