#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inquest/rules.hpp"

namespace inquest::catalogs {

/// Fourteen-assumption matrix over inspection, size and complexity metrics
/// (118 conjunctive rules, mean thresholds). Each direction combination of the combined
/// families is its own assumption:
///
///   I / II                      large / small inspection content or density, 4 severities
///   III.large / III.small       class length
///   IV.large / IV.small         mean method length
///   V / VI                      high / low cyclomatic complexity
///   VII-VIII.<d1>+<d2>          inspection x class length
///   IX-X.<d1>+<d2>              inspection x mean method length
///   XI-XIV.<d1>+<d2>            inspection x cyclomatic complexity
Catalog table1();

/// Ten top-n assumptions (cutoffs 3, 5, 8, 10) over module-level data:
///
///   A1..A4   inspection content with/without comments, raw/coverage-scaled
///   A5 / A6  small / large statement lines of code
///   A7 / A8  small / large waste per line
///   A9       union of A1 and A6 rankings
///   A10      union of A2 and A6 rankings
Catalog casestudy2();

std::vector<std::string> names();

/// Bundled catalog by name (`table1`, `casestudy2`), if any.
std::optional<Catalog> find(std::string_view name);

}  // namespace inquest::catalogs
