#include "svc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "svc/error.hpp"
#include "svc/extended_real.hpp"
#include "svc/transfer.hpp"

namespace svc {
namespace {

constexpr double kRescaleAbove = 1e100;
constexpr double kUnimodularFloor = 1e-9;

double max_abs(const TransferMatrix& m) {
  return std::max({std::abs(m.m11), std::abs(m.m12), std::abs(m.m21), std::abs(m.m22)});
}

TransferMatrix scale(const TransferMatrix& m, double factor) {
  return {m.m11 * factor, m.m12 * factor, m.m21 * factor, m.m22 * factor};
}

}  // namespace

double BarrierChain::barrier_measure() const {
  double total = 0.0;
  for (const auto& e : elements) {
    if (e.kind == ChainElement::Kind::kBarrier) total += e.width;
  }
  return total;
}

std::size_t BarrierChain::barrier_count() const {
  return static_cast<std::size_t>(std::count_if(elements.begin(), elements.end(), [](const auto& e) {
    return e.kind == ChainElement::Kind::kBarrier;
  }));
}

BarrierChain BarrierChain::reversed() const {
  BarrierChain out = *this;
  std::reverse(out.elements.begin(), out.elements.end());
  return out;
}

BarrierChain chain_from_layout(const SegmentLayout& layout) {
  if (!layout.has_intervals()) {
    throw InvalidArgument("chain_from_layout: layout was built without explicit intervals");
  }
  const auto& intervals = layout.intervals;
  BarrierChain chain;
  chain.elements.reserve(2 * intervals.size() - 1);
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (i > 0) {
      chain.elements.push_back({ChainElement::Kind::kGap, intervals[i].start - intervals[i - 1].end});
    }
    chain.elements.push_back({ChainElement::Kind::kBarrier, intervals[i].width()});
  }
  chain.total_span = intervals.back().end - intervals.front().start;
  return chain;
}

ScatteringPoint brute_force_T(const BarrierChain& chain, double V, double E) {
  if (!(E > 0.0)) throw InvalidArgument("brute_force_T: energy must be > 0");
  const double k = std::sqrt(E);

  TransferMatrix product = TransferMatrix::identity();
  double log_scale = 0.0;  // product = true product * e^{-log_scale}
  double position = 0.0;
  for (const auto& element : chain.elements) {
    if (element.kind == ChainElement::Kind::kBarrier) {
      const auto [barrier, barrier_scale] = barrier_matrix_scaled(E, V, element.width);
      product = compose(product, translate(barrier, k, position + 0.5 * element.width));
      log_scale += barrier_scale;
      const double biggest = max_abs(product);
      if (biggest > kRescaleAbove) {
        product = scale(product, 1.0 / biggest);
        log_scale += std::log(biggest);
      }
    }
    position += element.width;
  }

  // det(true product) = 1, so det(product) = e^{-2 log_scale}.
  const double expected_det = std::exp(-2.0 * log_scale);
  const double magnitude = std::abs(product.m11 * product.m22) + std::abs(product.m12 * product.m21);
  const double count = static_cast<double>(std::max<std::size_t>(chain.elements.size(), 1));
  const double bound = kUnimodularFloor * expected_det +
                       16.0 * std::numeric_limits<double>::epsilon() * count * magnitude;
  const double det_error = std::abs(product.det() - expected_det);
  if (!(det_error <= bound)) {
    throw ConsistencyError("brute_force_T: product is not unimodular (|det - 1| scaled error " +
                           std::to_string(det_error) + " > bound " + std::to_string(bound) + ")");
  }

  const double scaled_norm = std::norm(product.m12);
  if (log_scale == 0.0) return point_from_reflection_ratio(k, scaled_norm);
  return point_from_reflection_ratio(k,
                                     ExtendedReal(scaled_norm) * ExtendedReal::from_log(2.0 * log_scale));
}

}  // namespace svc
