#include "cmkz/json_io.hpp"

#include <string>

namespace cmkz {

Json complex_to_json(cplx c) { return Json::array({c.real(), c.imag()}); }

cplx complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidArgument("expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json complex_vector_to_json(const std::vector<cplx>& v) {
  Json out = Json::array();
  for (auto c : v) out.push_back(complex_to_json(c));
  return out;
}

std::vector<cplx> complex_vector_from_json(const Json& j) {
  std::vector<cplx> out;
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

Json to_json(const Partition& lambda) {
  Json out = Json::array();
  for (int i = 0; i < lambda.length(); ++i) out.push_back(lambda[static_cast<std::size_t>(i)]);
  return out;
}

Partition partition_from_json(const Json& j) { return Partition(j.get<std::vector<int>>()); }

Json to_json(const SpectralPoint& point) {
  return {{"z", complex_vector_to_json(point.z)}, {"p", complex_vector_to_json(point.p)}, {"residual", point.residual}};
}

SpectralPoint spectral_point_from_json(const Json& j) {
  return {complex_vector_from_json(j.at("z")), complex_vector_from_json(j.at("p")), j.value("residual", 0.0)};
}

Json to_json(const CMPoint& point) {
  Json Z = Json::array();
  for (Eigen::Index a = 0; a < point.Z.size(); ++a) Z.push_back(complex_to_json(point.Z(a)));
  Json Q = Json::array();
  for (Eigen::Index a = 0; a < point.Q.rows(); ++a) {
    Json row = Json::array();
    for (Eigen::Index b = 0; b < point.Q.cols(); ++b) row.push_back(complex_to_json(point.Q(a, b)));
    Q.push_back(std::move(row));
  }
  return {{"Z", std::move(Z)}, {"Q", std::move(Q)}};
}

CMPoint cm_point_from_json(const Json& j) {
  const auto z = complex_vector_from_json(j.at("Z"));
  const auto n = static_cast<Eigen::Index>(z.size());
  CMPoint point{CVector(n), CMatrix(n, n)};
  for (Eigen::Index a = 0; a < n; ++a) point.Z(a) = z[static_cast<std::size_t>(a)];
  const auto& Q = j.at("Q");
  if (static_cast<Eigen::Index>(Q.size()) != n) throw InvalidArgument("CMPoint: Q must be n×n");
  for (Eigen::Index a = 0; a < n; ++a) {
    if (static_cast<Eigen::Index>(Q[a].size()) != n) throw InvalidArgument("CMPoint: Q must be n×n");
    for (Eigen::Index b = 0; b < n; ++b) point.Q(a, b) = complex_from_json(Q[a][b]);
  }
  return point;
}

Json to_json(const CriticalPoint& point) {
  Json t = Json::array();
  for (const auto& level : point.config.t) t.push_back(complex_vector_to_json(level));
  return {{"z", complex_vector_to_json(point.config.z)},
          {"t", std::move(t)},
          {"p", complex_vector_to_json(point.p)},
          {"grad_norm", point.grad_norm}};
}

Json to_json(const PolyTuple& x) {
  Json coeffs = Json::object();
  for (std::size_t k = 0; k < x.slots().size(); ++k)
    coeffs[std::to_string(x.slots()[k].i) + "," + std::to_string(x.slots()[k].j)] = complex_to_json(x.values()[k]);
  return {{"lambda", to_json(x.lambda())}, {"coeffs", std::move(coeffs)}};
}

PolyTuple poly_tuple_from_json(const Json& j) {
  PolyTuple x(partition_from_json(j.at("lambda")));
  const auto& coeffs = j.at("coeffs");
  if (coeffs.size() != x.slots().size()) throw InvalidArgument("PolyTuple: wrong number of coefficients");
  for (const auto& [key, value] : coeffs.items()) {
    const auto comma = key.find(',');
    if (comma == std::string::npos) throw InvalidArgument("PolyTuple: coefficient keys look like \"i,j\"");
    x.set_coefficient(std::stoi(key.substr(0, comma)), std::stoi(key.substr(comma + 1)), complex_from_json(value));
  }
  return x;
}

Json to_json(const DiffOpCoeffs& op) {
  Json P = Json::array();
  for (Eigen::Index i = 0; i < op.P.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < op.P.cols(); ++j) row.push_back(complex_to_json(op.P(i, j)));
    P.push_back(std::move(row));
  }
  return P;
}

}  // namespace cmkz
