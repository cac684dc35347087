#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "moulton/cc_core.hpp"
#include "moulton/fourbody.hpp"
#include "moulton/monodromy.hpp"
#include "moulton/spectral.hpp"

namespace moulton {

using json = nlohmann::json;

void to_json(json& j, const MassVector& m);
MassVector masses_from_json(const json& j);

void to_json(json& j, const CollinearConfig& c);
CollinearConfig config_from_json(const json& j);

void to_json(json& j, const ReductionSpectrum& s);
void from_json(const json& j, ReductionSpectrum& s);

void to_json(json& j, const MonodromyResult& r);
void from_json(const json& j, MonodromyResult& r);

void to_json(json& j, const StabilityFactor& f);
void from_json(const json& j, StabilityFactor& f);
void to_json(json& j, const StabilityPattern& p);
void from_json(const json& j, StabilityPattern& p);

void to_json(json& j, const ResonanceValue& r);
void from_json(const json& j, ResonanceValue& r);

void to_json(json& j, const FourBodyFamily& f);
void from_json(const json& j, FourBodyFamily& f);

void to_json(json& j, const FourBodyLimit& l);
void from_json(const json& j, FourBodyLimit& l);

void to_json(json& j, const EssmReport& r);
void from_json(const json& j, EssmReport& r);

/// %.17g rendering; reads back to the same double.
std::string format_double(double v);

/// CSV with header beta,e,m1_re,m1_im,...,m4_im,pattern; one row per cell in
/// beta-major order, LF line endings.
void emit_scan_csv(const ScanGrid& grid, std::ostream& out);

}  // namespace moulton
