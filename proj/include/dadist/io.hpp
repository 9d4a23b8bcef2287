#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "dadist/families.hpp"

namespace dadist {

/// Matrix CSV: header `# dadist-matrix beta=<b> n=<n> m=<m>`, then n*m rows
/// `i,j,c1[,c2,..]` with beta real components per entry (order 1, i, j, k for
/// beta = 4). Indices are 0-based; every entry must appear exactly once.
void write_matrix_csv(std::ostream& out, const DAMatrix& x);
DAMatrix read_matrix_csv(std::istream& in);

/// Flat `key=value` lines; blank lines and `#` comments skipped; duplicate
/// keys rejected. Values keep embedded `=` characters.
std::map<std::string, std::string> parse_config(std::istream& in);

/// Family construction from config keys: `family`, `beta`, `m`, `a0`, and
/// either explicit `a1`, `a2`, .. or a shared `a` with arity `k`; optional
/// `kernel` (KernelSpec grammar) and `inverted`. Entries in `overrides` win
/// over `cfg` key by key.
FamilyInstance instance_from_config(
    const std::map<std::string, std::string>& cfg,
    const std::map<std::string, std::string>& overrides = {});

}  // namespace dadist
