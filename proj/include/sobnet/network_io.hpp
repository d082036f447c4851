#pragma once

#include <iosfwd>
#include <string>

#include "sobnet/network.hpp"

namespace sobnet {

// Plain-text network format:
//
//   sobnet-network 1
//   input_dim <d>
//   layers <L>
//   layer <l> <rows> <cols>
//   <row 1 of A_l: cols whitespace-separated decimals>
//   ...
//   <row `rows` of A_l>
//   bias <b_l entries>
//   ...repeated for every layer
//
// Numbers use the shortest decimal form that parses back to the same double.
// Lines starting with '#' are ignored on input.

void write_network(std::ostream& out, const Network& net);
Network read_network(std::istream& in);

void save_network(const std::string& path, const Network& net);
Network load_network(const std::string& path);

/// Shortest round-trip decimal representation of v.
std::string format_double(double v);

}  // namespace sobnet
