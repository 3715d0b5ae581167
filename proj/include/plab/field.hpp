#ifndef PLAB_FIELD_HPP
#define PLAB_FIELD_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "plab/errors.hpp"
#include "plab/graph.hpp"

namespace plab {

/// Real-valued function on a finite vertex set. Ids are kept sorted and the
/// value vector is aligned with them; all values must be finite.
class VertexField {
 public:
  VertexField() = default;
  /// `ids` must be sorted and duplicate free.
  VertexField(std::vector<VertexId> ids, std::vector<double> values);

  static VertexField constant(std::vector<VertexId> ids, double value);
  static VertexField from_map(const std::map<VertexId, double>& values);

  std::size_t size() const { return ids_.size(); }
  const std::vector<VertexId>& ids() const { return ids_; }
  const std::vector<double>& values() const { return values_; }
  std::span<const double> span() const { return values_; }

  double operator[](std::size_t i) const { return values_[i]; }
  /// Value at `id`; throws unknown_vertex when absent.
  double at(const VertexId& id) const;
  bool has(const VertexId& id) const;

  double max() const;
  double min() const;
  /// sup-norm max |f|.
  double sup_abs() const;

 private:
  std::vector<VertexId> ids_;
  std::vector<double> values_;
};

}  // namespace plab

#endif
