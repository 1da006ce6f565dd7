#pragma once

#include <iosfwd>
#include <string>

#include "tailblocks/series.hpp"

namespace tailblocks {

// one row per time point, one column per dimension, optional header row
Series read_csv(std::istream& in, NormKind norm = NormKind::Euclidean);
Series read_csv_file(const std::string& path, NormKind norm = NormKind::Euclidean);

void write_csv(const Series& series, std::ostream& out);
void write_csv_file(const Series& series, const std::string& path);

}  // namespace tailblocks
