#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "roughreflect/grid.hpp"

namespace roughreflect {

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

/// `t,x1,...,xd` (prefix replaces "x").
void write_path(std::ostream& os, const GridPath& p, const std::string& prefix = "x");

/// Several paths on the same grid side by side: `t,<p1>1..,<p2>1..`.
void write_paths(std::ostream& os, const std::vector<const GridPath*>& paths,
                 const std::vector<std::string>& prefixes);

/// Reads `t,...` rows.  With `step` given the times are snapped to that
/// lattice; otherwise the step is recovered from the first and last time.
GridPath read_path(std::istream& is, std::optional<double> step = std::nullopt);

/// `s,t,g11,...,gdm` for every ordered pair s < t.
void write_field(std::ostream& os, const TwoParamField& g);
TwoParamField read_field(std::istream& is, std::size_t rows, std::size_t cols, std::optional<double> step = std::nullopt);

void write_path_file(const std::string& path, const GridPath& p, const std::string& prefix = "x");
GridPath read_path_file(const std::string& path, std::optional<double> step = std::nullopt);
void write_field_file(const std::string& path, const TwoParamField& g);
TwoParamField read_field_file(const std::string& path, std::size_t rows, std::size_t cols,
                              std::optional<double> step = std::nullopt);

}  // namespace roughreflect
