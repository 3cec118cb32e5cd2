#pragma once

// Deterministic synthetic order-management log: orders, items and packages.
//
//   place_order   (order + its items)
//   pick_item     (one item)              once per item
//   pack_items    (package + all items of the package's orders)
//   ship_package  (package)
//
// Consecutive orders are grouped into packages, so packages bridge orders
// into multi-order process instances. Every event carries `price`, `weight`
// (numeric), `priority` (low/med/high, per order) and `region` (four values,
// per package).

#include <cstddef>
#include <cstdint>

#include "ocgad/ocel.hpp"

namespace ocgad {

struct CountRange {
  std::size_t min = 1;
  std::size_t max = 1;
};

struct GenConfig {
  std::size_t n_orders = 460;
  CountRange items_per_order{1, 3};
  CountRange orders_per_package{1, 2};
  std::uint64_t seed = 0;
  Timestamp base_time{1'672'531'200'000};  // 2023-01-01T00:00:00Z
  double mean_step_minutes = 60.0;

  // Throws Error(kInvalidArgument).
  void validate() const;
};

ObjectCentricLog generate(const GenConfig& cfg);

}  // namespace ocgad
