#pragma once

#include <vector>

#include "svc/geometry.hpp"
#include "svc/scattering_point.hpp"

namespace svc {

/// One piece of a barrier chain: a barrier of height V or a free gap.
struct ChainElement {
  enum class Kind { kBarrier, kGap };
  Kind kind = Kind::kBarrier;
  double width = 0.0;

  bool operator==(const ChainElement&) const = default;
};

/// Barriers and gaps in left-to-right order, starting at x = 0 with the
/// first barrier. Leading and trailing free space is dropped since the
/// transmission probability is translation invariant.
struct BarrierChain {
  std::vector<ChainElement> elements;
  double total_span = 0.0;

  double barrier_measure() const;
  std::size_t barrier_count() const;
  BarrierChain reversed() const;
};

/// Reads the chain off the explicit interval list. Throws InvalidArgument if
/// the layout was built without intervals.
BarrierChain chain_from_layout(const SegmentLayout& layout);

/// Brute-force transmission: multiplies every barrier matrix, translated to
/// its position, in spatial order. The running product is rescaled so opaque
/// chains report log10_T instead of overflowing. Throws ConsistencyError if
/// the product is not unimodular within the accumulated rounding bound.
ScatteringPoint brute_force_T(const BarrierChain& chain, double V, double E);

}  // namespace svc
