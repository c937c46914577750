#include "mwt/families.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "mwt/common.hpp"
#include "mwt/weights.hpp"

namespace mwt {

namespace {

std::vector<double> family_args(const std::string& text, std::size_t expected,
                                const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string piece =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw contract_error("bad number '" + piece + "' in " + what);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() != expected)
    throw contract_error(what + " expects " + std::to_string(expected) + " argument(s)");
  return out;
}

}  // namespace

SampledFunction parse_function(const Grid& grid, const std::string& spec) {
  const std::size_t colon = spec.find(':');
  const std::string family = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

  SampledFunction f{grid, std::vector<double>(static_cast<std::size_t>(grid.cells()), 0.0)};
  const long long n = grid.cells();

  if (family == "indicator") {
    const auto a = family_args(rest, 2, "indicator function");
    require(a[0] < a[1], "indicator function needs a < b");
    for (long long i = 0; i < n; ++i) {
      const double x = grid.midpoint(i);
      f.values[static_cast<std::size_t>(i)] = (x >= a[0] && x < a[1]) ? 1.0 : 0.0;
    }
    return f;
  }
  if (family == "tent") {
    const auto a = family_args(rest, 2, "tent function");
    require(a[1] > 0.0, "tent function needs a positive halfwidth");
    for (long long i = 0; i < n; ++i) {
      const double x = grid.midpoint(i);
      f.values[static_cast<std::size_t>(i)] = std::max(0.0, 1.0 - std::abs(x - a[0]) / a[1]);
    }
    return f;
  }
  if (family == "bump") {
    const auto a = family_args(rest, 2, "bump function");
    require(a[1] > 0.0, "bump function needs a positive width");
    for (long long i = 0; i < n; ++i) {
      const double z = (grid.midpoint(i) - a[0]) / a[1];
      f.values[static_cast<std::size_t>(i)] = std::exp(-z * z);
    }
    return f;
  }
  if (family == "spike") {
    const auto a = family_args(rest, 1, "spike function");
    require(a[0] >= grid.lo && a[0] < grid.hi, "spike location must lie inside the domain");
    long long cell = static_cast<long long>(std::floor((a[0] - grid.lo) / grid.h()));
    cell = std::min<long long>(std::max<long long>(cell, 0), n - 1);
    f.values[static_cast<std::size_t>(cell)] = 1.0;
    return f;
  }
  if (family == "pwc") {
    const auto a = family_args(rest, 2, "piecewise constant function");
    const long long pieces = static_cast<long long>(a[1]);
    require(pieces >= 1 && pieces <= n, "piecewise constant function needs 1 <= pieces <= cells");
    DetRng rng(static_cast<std::uint64_t>(a[0]));
    std::vector<double> level(static_cast<std::size_t>(pieces));
    for (auto& v : level) v = rng.uniform();
    for (long long i = 0; i < n; ++i) {
      // Assign by position so refinements sample the same step profile.
      const double x = (grid.midpoint(i) - grid.lo) / (grid.hi - grid.lo);
      long long piece = static_cast<long long>(std::floor(x * static_cast<double>(pieces)));
      piece = std::min<long long>(std::max<long long>(piece, 0), pieces - 1);
      f.values[static_cast<std::size_t>(i)] = level[static_cast<std::size_t>(piece)];
    }
    return f;
  }
  // Anything else is handled by the weight families (const, power, logbmo, random).
  return parse_weight(grid, spec);
}

}  // namespace mwt
