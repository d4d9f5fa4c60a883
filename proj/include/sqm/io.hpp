#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "sqm/fairness.hpp"
#include "sqm/mechanism.hpp"
#include "sqm/properties.hpp"
#include "sqm/search.hpp"

namespace sqm::io {

using Json = nlohmann::ordered_json;

/// Accepts an integer, [num, den] or "num/den".
Rational rational_from_json(const Json& j);
Json to_json(const Rational& r);
/// {"exact": "num/den", "decimal": x}
Json ratio_json(const Rational& r);

Json to_json(const Preference& pref);
Preference preference_from_json(const Json& j);
Json to_json(const Profile& profile);
Json to_json(const Allocation& alloc);
Json to_json(const QuotaOrdering& qo);

ClassTag class_tag_from_string(std::string_view tag);  // throws InvalidInput
Json to_json(const PreferenceClass& cls);
/// A tag string (with `m` supplied) or {"tag", "m", "members"}.
ClassPtr class_from_json(const Json& j, int m);

/// Mechanism descriptor; throws Error(InvalidInput) on malformed input and lets
/// construction errors (QuotaOverflow, DomainError, ...) propagate.
Mechanism mechanism_from_json(const Json& j);
Json to_json(const Mechanism& mech);

Json to_json(const Witness& witness);
Json to_json(const PropertyReport& report);

/// {"n", "m", "valuations": [[rational, ...], ...]}
CardinalInstance instance_from_json(const Json& j);
Json to_json(const CardinalInstance& instance);
Json to_json(const FairnessAudit& audit);

Json to_json(const CharacterizationReport& report);
Json to_json(const MutationReport& report);

/// Parses text, mapping parse failures to Error(InvalidInput).
Json parse(std::string_view text);
Json load_file(const std::string& path);

}  // namespace sqm::io
