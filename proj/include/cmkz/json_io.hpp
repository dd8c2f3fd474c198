#pragma once

#include <json.hpp>

#include "cmkz/calogero_moser.hpp"
#include "cmkz/master_function.hpp"
#include "cmkz/partitions.hpp"
#include "cmkz/types.hpp"
#include "cmkz/wronski.hpp"

// Complex numbers serialize as [re, im]; doubles use nlohmann's shortest
// round-trip representation.
namespace cmkz {

using Json = nlohmann::json;

Json complex_to_json(cplx c);
cplx complex_from_json(const Json& j);
Json complex_vector_to_json(const std::vector<cplx>& v);
std::vector<cplx> complex_vector_from_json(const Json& j);

Json to_json(const Partition& lambda);
Partition partition_from_json(const Json& j);

Json to_json(const SpectralPoint& point);
SpectralPoint spectral_point_from_json(const Json& j);

Json to_json(const CMPoint& point);
CMPoint cm_point_from_json(const Json& j);

Json to_json(const CriticalPoint& point);

Json to_json(const PolyTuple& x);
PolyTuple poly_tuple_from_json(const Json& j);

Json to_json(const DiffOpCoeffs& op);

}  // namespace cmkz
