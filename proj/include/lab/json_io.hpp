#pragma once

#include "lab/cascade.hpp"
#include "lab/horseshoe.hpp"
#include "lab/measures.hpp"
#include "lab/pwa_map.hpp"
#include "lab/qr_covering.hpp"
#include "lab/shadowing.hpp"
#include "lab/shrinking.hpp"

#include <json.hpp>

#include <string>

namespace lab {

using Json = nlohmann::json;

Json to_json(const Rational& q);
Rational rational_from_json(const Json& j, const std::string& field);

/// {"breakpoints": [...], "values": [...]}
Json to_json(const PwaMap& f);
PwaMap pwa_from_json(const Json& j);

/// {"atoms": [[point, weight], ...]}
Json to_json(const AtomicMeasure& mu);
AtomicMeasure measure_from_json(const Json& j);

/// {"lo", "hi", "closed_lo", "closed_hi"}
Json to_json(const Interval& I);
Interval interval_from_json(const Json& j);

Json to_json(const ShrinkingCertificate& c, bool verified);
ShrinkingCertificate certificate_from_json(const Json& j);

Json to_json(const Horseshoe& hs);
Horseshoe horseshoe_from_json(const Json& j);
/// Atoms keyed by index word, one object per generation.
Json to_json(const AtomTree& tree);

Json to_json(const CascadeAtoms& ca);
CascadeAtoms cascade_from_json(const Json& j);

Json to_json(const QRCovering& cov);

/// {"points": [...], "delta": ..., "periodic": bool}
PseudoOrbit pseudo_orbit_from_json(const Json& j);

Json read_json_file(const std::string& path);
/// Writes through a temporary file and a rename; keys sorted, 2-space indent.
void write_json_file(const std::string& path, const Json& j);

}  // namespace lab
