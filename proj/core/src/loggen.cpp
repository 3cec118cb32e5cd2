#include "ocgad/loggen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "ocgad/error.hpp"
#include "ocgad/numerics.hpp"

namespace ocgad {
namespace {

constexpr std::array<const char*, 3> kPriorities = {"low", "med", "high"};
constexpr std::array<double, 3> kPriorityWeights = {0.5, 0.3, 0.2};
constexpr std::array<double, 3> kItemBasePrice = {20.0, 50.0, 120.0};
constexpr std::array<const char*, 4> kRegions = {"north", "east", "south", "west"};
constexpr double kNoise = 0.05;
constexpr std::int64_t kMinStepMillis = 60'000;

struct Draft {
  std::string activity;
  std::int64_t time = 0;
  std::set<std::string> objects;
  double price = 0.0;
  double weight = 0.0;
  std::size_t priority = 0;
  std::size_t region = 0;
};

struct Order {
  std::string id;
  std::size_t priority = 0;
  std::size_t region = 0;
  std::vector<std::string> items;
  std::vector<double> item_price;
  std::vector<double> item_weight;
  std::int64_t placed = 0;
  std::vector<std::int64_t> picked;
};

std::size_t draw_count(const CountRange& r, Rng& rng) {
  return r.min + rng.uniform_index(r.max - r.min + 1);
}

double jitter(Rng& rng) { return 1.0 + rng.uniform(-kNoise, kNoise); }

}  // namespace

void GenConfig::validate() const {
  if (n_orders < 1) throw Error(Errc::kInvalidArgument, "n_orders must be >= 1");
  if (items_per_order.min < 1 || items_per_order.min > items_per_order.max) {
    throw Error(Errc::kInvalidArgument, "items_per_order range is empty");
  }
  if (orders_per_package.min < 1 ||
      orders_per_package.min > orders_per_package.max) {
    throw Error(Errc::kInvalidArgument, "orders_per_package range is empty");
  }
  if (!(mean_step_minutes > 0.0) || !std::isfinite(mean_step_minutes)) {
    throw Error(Errc::kInvalidArgument, "mean_step_minutes must be positive");
  }
}

ObjectCentricLog generate(const GenConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const double mean_step_ms = cfg.mean_step_minutes * 60'000.0;
  auto step = [&]() {
    return std::max(kMinStepMillis,
                    static_cast<std::int64_t>(std::llround(rng.exponential(mean_step_ms))));
  };

  ObjectCentricLog log;
  log.object_types = {"item", "order", "package"};
  std::vector<Draft> drafts;

  // Packages are consecutive runs of orders; the region belongs to the package.
  std::vector<std::vector<std::size_t>> packages;
  for (std::size_t next = 0; next < cfg.n_orders;) {
    const std::size_t size =
        std::min(draw_count(cfg.orders_per_package, rng), cfg.n_orders - next);
    std::vector<std::size_t> members(size);
    std::iota(members.begin(), members.end(), next);
    packages.push_back(std::move(members));
    next += size;
  }

  std::vector<Order> orders(cfg.n_orders);
  std::int64_t clock = cfg.base_time.millis_since_epoch;
  std::size_t item_counter = 0;
  for (std::size_t p = 0; p < packages.size(); ++p) {
    const std::size_t region = rng.uniform_index(kRegions.size());
    for (std::size_t o : packages[p]) {
      Order& ord = orders[o];
      ord.id = "o" + std::to_string(o + 1);
      ord.region = region;
      const double u = rng.uniform();
      ord.priority = u < kPriorityWeights[0]
                         ? 0
                         : (u < kPriorityWeights[0] + kPriorityWeights[1] ? 1 : 2);
      const std::size_t n_items = draw_count(cfg.items_per_order, rng);
      for (std::size_t i = 0; i < n_items; ++i) {
        ord.items.push_back("i" + std::to_string(++item_counter));
        ord.item_price.push_back(kItemBasePrice[ord.priority] * jitter(rng));
        ord.item_weight.push_back(jitter(rng));
      }
      log.objects.push_back({ord.id, "order"});
      for (const auto& item : ord.items) log.objects.push_back({item, "item"});

      clock += step();
      ord.placed = clock;
      Draft place{"place_order", ord.placed, {ord.id}, 0.0, 0.0, ord.priority, region};
      place.objects.insert(ord.items.begin(), ord.items.end());
      place.price = std::accumulate(ord.item_price.begin(), ord.item_price.end(), 0.0);
      place.weight = std::accumulate(ord.item_weight.begin(), ord.item_weight.end(), 0.0);
      drafts.push_back(std::move(place));

      for (std::size_t i = 0; i < ord.items.size(); ++i) {
        const std::int64_t t = ord.placed + step();
        ord.picked.push_back(t);
        drafts.push_back({"pick_item", t, {ord.items[i]}, ord.item_price[i],
                          ord.item_weight[i], ord.priority, region});
      }
    }
  }

  for (std::size_t p = 0; p < packages.size(); ++p) {
    const std::string package_id = "p" + std::to_string(p + 1);
    log.objects.push_back({package_id, "package"});
    Draft pack{"pack_items", 0, {package_id}, 0.0, 0.0, 0, 0};
    std::int64_t ready = 0;
    for (std::size_t o : packages[p]) {
      const Order& ord = orders[o];
      pack.objects.insert(ord.items.begin(), ord.items.end());
      for (std::int64_t t : ord.picked) ready = std::max(ready, t);
      for (std::size_t i = 0; i < ord.items.size(); ++i) {
        pack.price += ord.item_price[i];
        pack.weight += ord.item_weight[i];
      }
      pack.priority = std::max(pack.priority, ord.priority);
      pack.region = ord.region;
    }
    pack.time = ready + step();
    pack.weight += 0.5 * jitter(rng);

    Draft ship = pack;
    ship.activity = "ship_package";
    ship.objects = {package_id};
    ship.time = pack.time + step();
    ship.price = 5.0 + 0.05 * pack.price * jitter(rng);
    drafts.push_back(std::move(pack));
    drafts.push_back(std::move(ship));
  }

  std::vector<std::size_t> order(drafts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return drafts[a].time < drafts[b].time;
  });

  log.events.reserve(drafts.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    Draft& d = drafts[order[rank]];
    Event ev;
    ev.id = "e" + std::to_string(rank + 1);
    ev.activity = d.activity;
    ev.timestamp = Timestamp{d.time};
    ev.object_refs = std::move(d.objects);
    ev.attributes.emplace("price", AttributeValue::numeric(d.price));
    ev.attributes.emplace("weight", AttributeValue::numeric(d.weight));
    ev.attributes.emplace("priority", AttributeValue::categorical(kPriorities[d.priority]));
    ev.attributes.emplace("region", AttributeValue::categorical(kRegions[d.region]));
    log.activities.insert(ev.activity);
    log.events.push_back(std::move(ev));
  }
  log.schema = {{"price", AttributeKind::kNumeric},
                {"priority", AttributeKind::kCategorical},
                {"region", AttributeKind::kCategorical},
                {"weight", AttributeKind::kNumeric}};
  return log;
}

}  // namespace ocgad
