#include "kwidth/reports/json_io.hpp"

#include <string>

namespace kwidth::reports {

std::string_view to_string(RootBranch branch) {
  return branch == RootBranch::HalfClass ? "half" : "zero";
}

std::string_view to_string(DerivativePath path) {
  switch (path) {
    case DerivativePath::Auto: return "auto";
    case DerivativePath::Direct: return "direct";
    case DerivativePath::Lemma1: return "lemma1";
    case DerivativePath::Lemma2: return "lemma2";
  }
  return "auto";
}

DerivativePath parse_path(std::string_view text) {
  if (text == "auto") return DerivativePath::Auto;
  if (text == "direct") return DerivativePath::Direct;
  if (text == "lemma1") return DerivativePath::Lemma1;
  if (text == "lemma2") return DerivativePath::Lemma2;
  throw Error(ErrorKind::Validation, "unknown path '" + std::string(text) + "'");
}

Json to_json(const ThetaRoot& root) {
  return Json{{"theta", root.theta},
              {"residual", root.residual},
              {"branch", to_string(root.branch)},
              {"bracket", {root.bracket_lo, root.bracket_hi}},
              {"iterations", root.iterations},
              {"exact", root.exact},
              {"cos_offset", root.cos_offset},
              {"sin_sign", root.sin_sign}};
}

Json to_json(const WidthReport& r) {
  return Json{{"q", r.q},
              {"beta", r.beta},
              {"n", r.n},
              {"theta_n", r.root.theta},
              {"y0", r.y0},
              {"width", r.width},
              {"gamma_n", r.gamma_n},
              {"sandwich_lo", r.sandwich_lo},
              {"sandwich_hi", r.sandwich_hi},
              {"sandwich_holds", r.sandwich_holds()},
              {"gamma_within_bound", r.gamma_within_bound()},
              {"root", to_json(r.root)}};
}

Json to_json(const ConditionCheck& c) {
  return Json{{"holds", c.holds}, {"lhs", c.lhs}, {"rhs", c.rhs}};
}

Json to_json(const ThresholdVerdict& v) {
  return Json{{"n", v.n}, {"cond_z", to_json(v.cond_z)}, {"cond_n0", to_json(v.cond_n0)}};
}

Json to_json(const CyVerdict& v) {
  Json j{{"holds", v.holds},
         {"epsilon", v.epsilon},
         {"y", v.y},
         {"path", to_string(v.path)},
         {"zero_tol", v.zero_tol},
         {"pattern", v.pattern},
         {"normalized", v.normalized}};
  if (v.modulus_margin) j["modulus_margin"] = *v.modulus_margin;
  return j;
}

Json to_json(const DetResult& d) {
  return Json{{"value", d.value},
              {"error_estimate", d.error_estimate},
              {"extended", d.extended},
              {"certified_sign", d.certified_sign()},
              {"dimension", d.dimension}};
}

Json to_json(const NodeVectors& nodes) {
  auto pack = [](const std::vector<PiRational>& v) {
    Json arr = Json::array();
    for (const PiRational& p : v) arr.push_back({p.num, p.den});
    return arr;
  };
  return Json{{"x", pack(nodes.x)}, {"y", pack(nodes.y)}};
}

NodeVectors node_vectors_from_json(const Json& j) {
  auto unpack = [&](const char* key) {
    std::vector<PiRational> out;
    if (!j.contains(key) || !j.at(key).is_array()) {
      throw Error(ErrorKind::Validation, std::string("node vectors need array '") + key + "'");
    }
    for (const Json& e : j.at(key)) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
        throw Error(ErrorKind::Validation, "node entries must be [num, den] integer pairs");
      }
      out.push_back(PiRational::make(e[0].get<std::int64_t>(), e[1].get<std::int64_t>()));
    }
    return out;
  };
  NodeVectors nodes{unpack("x"), unpack("y")};
  nodes.validate();
  return nodes;
}

Json to_json(const CvdWitness& w) {
  return Json{{"negative", {{"nodes", to_json(w.negative)}, {"det", to_json(w.det_negative)}}},
              {"positive", {{"nodes", to_json(w.positive)}, {"det", to_json(w.det_positive)}}},
              {"evaluations", w.evaluations}};
}

Json to_json(const Lemma3Check& c) {
  return Json{{"n", c.n}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"worst_k", c.worst_k}, {"holds", c.holds()}};
}

Json error_json(ErrorKind kind, std::string_view message) {
  return Json{{"error", {{"kind", to_string(kind)}, {"message", message}}}};
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation:
    case ErrorKind::Domain:
      return 2;
    case ErrorKind::NotFound:
      return 3;
    default:
      return 4;
  }
}

}  // namespace kwidth::reports
