#include "fairpost/criterion.hpp"

#include <sstream>
#include <stdexcept>

namespace fairpost {

bool GroupEvent::matches(const LabeledDataset& ds, std::size_t row) const {
  if (label && ds.labels[row] != *label) return false;
  for (const auto& [name, value] : attrs) {
    if (ds.attribute(name)[row] != value) return false;
  }
  return true;
}

std::string GroupEvent::describe() const {
  std::ostringstream s;
  bool first = true;
  for (const auto& [name, value] : attrs) {
    if (!first) s << ",";
    s << name << "=" << value;
    first = false;
  }
  if (label) {
    if (!first) s << ",";
    s << "Y=" << *label;
  }
  return s.str();
}

Side CriterionComponent::side_of(const LabeledDataset& ds,
                                 std::size_t row) const {
  const bool in_a = event_a.matches(ds, row);
  const bool in_b = event_b.matches(ds, row);
  if (in_a && in_b) {
    throw std::runtime_error("component '" + name +
                             "': group events overlap on row " +
                             std::to_string(row + 1));
  }
  if (in_a) return Side::a;
  if (in_b) return Side::b;
  return Side::neither;
}

void CriterionSpec::validate() const {
  if (components.empty()) {
    throw std::invalid_argument("criterion needs at least one component");
  }
  switch (kind) {
    case CriterionKind::dp:
    case CriterionKind::eop:
      if (components.size() != 1) {
        throw std::invalid_argument("DP/EOp criteria have exactly one component");
      }
      break;
    case CriterionKind::eo:
      if (components.size() != 2) {
        throw std::invalid_argument("EO criteria have exactly two components");
      }
      break;
    case CriterionKind::custom:
      break;
  }
  if (priors_set()) {
    for (const auto& c : components) {
      if (!(c.prior_a > 0.0) || !(c.prior_b > 0.0)) {
        throw std::invalid_argument("component '" + c.name +
                                    "': priors must be strictly positive");
      }
    }
  }
}

bool CriterionSpec::priors_set() const {
  for (const auto& c : components) {
    if (c.prior_a <= 0.0 || c.prior_b <= 0.0) return false;
  }
  return true;
}

CriterionSpec CriterionSpec::demographic_parity(const std::string& attr) {
  CriterionSpec spec;
  spec.kind = CriterionKind::dp;
  CriterionComponent c;
  c.name = "0";
  c.event_a.attrs = {{attr, 0}};
  c.event_b.attrs = {{attr, 1}};
  spec.components.push_back(std::move(c));
  return spec;
}

CriterionSpec CriterionSpec::equalized_opportunity(const std::string& attr) {
  CriterionSpec spec;
  spec.kind = CriterionKind::eop;
  CriterionComponent c;
  c.name = "0";
  c.event_a.label = 1;
  c.event_a.attrs = {{attr, 0}};
  c.event_b.label = 1;
  c.event_b.attrs = {{attr, 1}};
  spec.components.push_back(std::move(c));
  return spec;
}

CriterionSpec CriterionSpec::equalized_odds(const std::string& attr) {
  CriterionSpec spec;
  spec.kind = CriterionKind::eo;
  for (int y = 0; y <= 1; ++y) {
    CriterionComponent c;
    c.name = std::to_string(y);
    c.event_a.label = y;
    c.event_a.attrs = {{attr, 0}};
    c.event_b.label = y;
    c.event_b.attrs = {{attr, 1}};
    spec.components.push_back(std::move(c));
  }
  return spec;
}

CriterionKind parse_criterion_kind(const std::string& name) {
  if (name == "dp") return CriterionKind::dp;
  if (name == "eop") return CriterionKind::eop;
  if (name == "eo") return CriterionKind::eo;
  throw std::invalid_argument("unknown criterion kind '" + name +
                              "' (expected dp, eop, or eo)");
}

std::string criterion_kind_name(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::dp: return "dp";
    case CriterionKind::eop: return "eop";
    case CriterionKind::eo: return "eo";
    case CriterionKind::custom: return "custom";
  }
  return "custom";
}

CriterionSpec make_criterion(CriterionKind kind, const std::string& attr) {
  switch (kind) {
    case CriterionKind::dp: return CriterionSpec::demographic_parity(attr);
    case CriterionKind::eop: return CriterionSpec::equalized_opportunity(attr);
    case CriterionKind::eo: return CriterionSpec::equalized_odds(attr);
    case CriterionKind::custom:
      throw std::invalid_argument("custom criteria must be built explicitly");
  }
  throw std::invalid_argument("bad criterion kind");
}

CriterionSpec estimate_priors(const LabeledDataset& ds,
                              const CriterionSpec& spec) {
  CriterionSpec out = spec;
  for (auto& c : out.components) {
    std::size_t count_a = 0, count_b = 0;
    for (std::size_t i = 0; i < ds.n; ++i) {
      switch (c.side_of(ds, i)) {
        case Side::a: ++count_a; break;
        case Side::b: ++count_b; break;
        case Side::neither: break;
      }
    }
    if (count_a == 0 || count_b == 0) {
      throw std::runtime_error(
          "component '" + c.name + "': empty group (" +
          (count_a == 0 ? c.event_a.describe() : c.event_b.describe()) +
          " has no members)");
    }
    c.prior_a = static_cast<double>(count_a) / static_cast<double>(ds.n);
    c.prior_b = static_cast<double>(count_b) / static_cast<double>(ds.n);
  }
  return out;
}

}  // namespace fairpost
