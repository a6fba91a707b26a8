#pragma once

#include <ostream>

#include "json.hpp"

#include "hrvkit/detect.hpp"
#include "hrvkit/finiteness.hpp"
#include "hrvkit/risk.hpp"
#include "hrvkit/spectral.hpp"
#include "hrvkit/tail_index.hpp"

// JSON views of library results. Infinite reals are written as the string
// "inf" since JSON has no literal for them.
namespace hrvkit::io {

using nlohmann::json;

json number(double x);

json to_json(const spectral::SpectralAtoms& atoms);
json to_json(const spectral::TransformedAtoms& atoms);
json to_json(const tail::TailFit& fit);
json to_json(const detect::DetectionReport& report);
json to_json(const finiteness::MassVerdict& verdict);
json to_json(const finiteness::ExponentCheck& check);
json to_json(const risk::RiskEstimate& estimate);

/// Parses {"level", "dim", "atoms": [{"weight", "point"}]}.
spectral::SpectralAtoms spectral_atoms_from_json(const json& j);

/// Header "s,density" for d = 2 and "s1,s2,density" for d = 3.
void write_density_csv(std::ostream& out, const spectral::DensityCurve& curve);

} // namespace hrvkit::io
