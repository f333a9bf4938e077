#pragma once

#include <json.hpp>

#include "sscx/boundary.hpp"
#include "sscx/dynamics.hpp"
#include "sscx/geometry.hpp"
#include "sscx/verify.hpp"

namespace sscx::report {

using nlohmann::ordered_json;

ordered_json to_json(const Calibration& cal);
ordered_json to_json(const ConeTypeReport& rep);
ordered_json to_json(const BoundedDegreeStats& st);
ordered_json to_json(const DynatlasReport& rep);
ordered_json to_json(const LocalDegree& deg);
ordered_json to_json(const PreimageReport& rep);
ordered_json to_json(const DiameterReport& rep);
ordered_json to_json(const VerifyReport& rep);

}  // namespace sscx::report
