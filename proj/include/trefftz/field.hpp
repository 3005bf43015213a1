#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "trefftz/basis.hpp"
#include "trefftz/geometry.hpp"

namespace trefftz {

// A complex field defined element-by-element (possibly discontinuous across
// facets).  Facet and volume functionals evaluate traces through this
// interface so that discrete solutions, exact solutions and their differences
// share one code path.
class ElementField {
 public:
  virtual ~ElementField() = default;
  virtual cplx value(int elem, Vec2 x) const = 0;
  virtual CVec2 gradient(int elem, Vec2 x) const = 0;
};

// Per-element offsets of stacked local spaces: offsets[e] is the global index
// of element e's first member, offsets.back() the total dimension.
inline std::vector<int> space_offsets(const std::vector<LocalSpace>& spaces) {
  std::vector<int> offsets(spaces.size() + 1, 0);
  for (std::size_t e = 0; e < spaces.size(); ++e) {
    offsets[e + 1] = offsets[e] + spaces[e].dim();
  }
  return offsets;
}

// Discrete field sum_m c_{K,m} phi_{K,m} given per-element local spaces and a
// stacked coefficient vector.
class DiscreteField : public ElementField {
 public:
  DiscreteField(const std::vector<LocalSpace>* spaces, std::vector<cplx> coeffs)
      : spaces_(spaces), offsets_(space_offsets(*spaces)), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != offsets_.back()) {
      throw std::invalid_argument("field: coefficient count does not match spaces");
    }
  }

  cplx value(int elem, Vec2 x) const override {
    const BasisEval ev = (*spaces_)[elem].eval(x);
    cplx s = 0.0;
    for (int m = 0; m < static_cast<int>(ev.values.size()); ++m) {
      s += coeffs_[offsets_[elem] + m] * ev.values[m];
    }
    return s;
  }

  CVec2 gradient(int elem, Vec2 x) const override {
    const BasisEval ev = (*spaces_)[elem].eval(x);
    CVec2 g{0.0, 0.0};
    for (int m = 0; m < static_cast<int>(ev.gradients.size()); ++m) {
      const cplx c = coeffs_[offsets_[elem] + m];
      g.x += c * ev.gradients[m].x;
      g.y += c * ev.gradients[m].y;
    }
    return g;
  }

  const std::vector<cplx>& coefficients() const { return coeffs_; }
  const std::vector<int>& offsets() const { return offsets_; }

 private:
  const std::vector<LocalSpace>* spaces_;
  std::vector<int> offsets_;
  std::vector<cplx> coeffs_;
};

// Difference a - b, used for error fields.
class DifferenceField : public ElementField {
 public:
  DifferenceField(const ElementField* a, const ElementField* b) : a_(a), b_(b) {}
  cplx value(int elem, Vec2 x) const override {
    return a_->value(elem, x) - b_->value(elem, x);
  }
  CVec2 gradient(int elem, Vec2 x) const override {
    const CVec2 ga = a_->gradient(elem, x);
    const CVec2 gb = b_->gradient(elem, x);
    return {ga.x - gb.x, ga.y - gb.y};
  }

 private:
  const ElementField* a_;
  const ElementField* b_;
};

}  // namespace trefftz
