#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace acctest {

/// One constant segment of a step function on [0,1]. Segments are half-open
/// [lo, hi) except the last, which is closed at 1.
struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.0;

  friend bool operator==(const Piece&, const Piece&) = default;
};

/// Checks that the pieces tile [0,1] in order with nonnegative levels and a
/// total mass of one (within 1e-9). Throws ValidationError naming `what`.
void validate_pieces(std::span<const Piece> pieces, std::string_view what);

double piece_value(std::span<const Piece> pieces, double t);

/// Parses "lo,hi,level;lo,hi,level;...".
std::vector<Piece> parse_pieces(std::string_view text);
std::string format_pieces(std::span<const Piece> pieces);

}  // namespace acctest
