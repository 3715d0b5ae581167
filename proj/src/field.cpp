#include "plab/field.hpp"

#include <algorithm>
#include <cmath>

namespace plab {

VertexField::VertexField(std::vector<VertexId> ids, std::vector<double> values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  if (ids_.size() != values_.size())
    throw Error(ErrorCode::invalid_argument,
                "field ids and values differ in length");
  if (!std::is_sorted(ids_.begin(), ids_.end()))
    throw Error(ErrorCode::invalid_argument, "field ids must be sorted");
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
    throw Error(ErrorCode::invalid_argument, "duplicate vertex id in field");
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw Error(ErrorCode::non_finite_value,
                  "non-finite value at vertex '" + ids_[i] + "'");
}

VertexField VertexField::constant(std::vector<VertexId> ids, double value) {
  std::vector<double> vals(ids.size(), value);
  return VertexField(std::move(ids), std::move(vals));
}

VertexField VertexField::from_map(const std::map<VertexId, double>& values) {
  std::vector<VertexId> ids;
  std::vector<double> vals;
  ids.reserve(values.size());
  vals.reserve(values.size());
  for (const auto& [id, v] : values) {
    ids.push_back(id);
    vals.push_back(v);
  }
  return VertexField(std::move(ids), std::move(vals));
}

double VertexField::at(const VertexId& id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id)
    throw Error(ErrorCode::unknown_vertex, "no value for vertex '" + id + "'");
  return values_[static_cast<std::size_t>(it - ids_.begin())];
}

bool VertexField::has(const VertexId& id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

double VertexField::max() const {
  if (values_.empty())
    throw Error(ErrorCode::invalid_argument, "max of empty field");
  return *std::max_element(values_.begin(), values_.end());
}

double VertexField::min() const {
  if (values_.empty())
    throw Error(ErrorCode::invalid_argument, "min of empty field");
  return *std::min_element(values_.begin(), values_.end());
}

double VertexField::sup_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace plab
