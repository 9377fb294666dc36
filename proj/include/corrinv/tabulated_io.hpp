#pragma once

#include <iosfwd>
#include <string>

#include "corrinv/models.hpp"

namespace corrinv {

/// CSV with header `r,g2`: monotone r starting at 0, `#` comments allowed,
/// plain decimal point. Throws ConfigError on malformed input.
RadialTable read_radial_csv(std::istream& in, const std::string& source_name = "<stream>");
RadialTable read_radial_csv_file(const std::string& path);

/// CSV with header `r1,r2,t3`; rows must form a complete rectangular grid.
PairTable read_pair_csv(std::istream& in, const std::string& source_name = "<stream>");
PairTable read_pair_csv_file(const std::string& path);

/// Sample a model's g2 = rho^(2)/rho^2 and t3 = rho_T^(3)/rho^3 onto grids,
/// e.g. to round-trip an analytic backend through the tabulated one (d = 1).
RadialTable tabulate_g2(const CorrelationModel& model, double r_max, int points);
PairTable tabulate_t3(const CorrelationModel& model, double span, int points);

void write_radial_csv(std::ostream& out, const RadialTable& table);
void write_pair_csv(std::ostream& out, const PairTable& table);

} // namespace corrinv
