#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stpp/pattern.hpp"

namespace stpp {

/// Result of reading a catalog: the validated pattern plus what was dropped.
struct CatalogLoad {
    MarkedPattern pattern;
    std::size_t rows_read = 0;
    std::size_t dropped_outside = 0;
    std::size_t duplicates = 0;
    std::vector<std::string> warnings;
};

/// Reads a CSV catalog with header `x,y,t,mark` (d = 2) or
/// `x1,...,xd,t,mark`. Rows outside the window are dropped and counted;
/// repeated rows collapse to one. Throws ParseError on malformed rows and
/// InputError if no point survives.
CatalogLoad load_catalog(const std::string& path, const Window& window, const MarkSpace& marks);
CatalogLoad read_catalog(std::istream& in, const Window& window, const MarkSpace& marks);

/// Writes the catalog format read by load_catalog.
void write_catalog(std::ostream& out, const MarkedPattern& p);

/// Shortest round-trip decimal representation of v.
std::string format_number(double v);

}  // namespace stpp
