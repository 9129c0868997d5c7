#pragma once

#include <iosfwd>
#include <string>

#include "qsysid/simulate.hpp"
#include "qsysid/types.hpp"

namespace qsysid {

/// %.17g, enough digits to round-trip every double.
std::string format_double(double v);

/// Header `t,u,y` or `t,u,y,z`; row t = 1..N holds u_{t-1}, y_t and
/// optionally z_t.
void write_dataset_csv(std::ostream& out, const Dataset& data, bool with_latent);

/// Reads the format written by write_dataset_csv. Columns may appear in any
/// order; t, u and y are required. Throws FormatError.
Dataset read_dataset_csv(std::istream& in);

/// Header `k,<column>`, rows k = 1..n.
void write_impulse_response_csv(std::ostream& out, const ImpulseResponse& g, const std::string& column);

}  // namespace qsysid
