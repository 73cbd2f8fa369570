#include "tel/maxmin.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace tel {

std::vector<double> max_min_allocate(const std::vector<double>& capacity_bps,
                                     const std::vector<std::vector<int>>& flow_links,
                                     const std::vector<double>& demand_bps) {
  const std::size_t flows = flow_links.size();
  if (demand_bps.size() != flows)
    throw std::invalid_argument("max_min_allocate: demand/flow size mismatch");

  std::vector<double> rate(flows, 0.0);
  std::vector<char> frozen(flows, 0);
  std::vector<double> load(capacity_bps.size(), 0.0);
  std::vector<int> active_on_link(capacity_bps.size(), 0);

  for (std::size_t f = 0; f < flows; ++f)
    if (demand_bps[f] <= 0.0) frozen[f] = 1;

  constexpr double kEps = 1e-9;
  while (true) {
    std::fill(active_on_link.begin(), active_on_link.end(), 0);
    std::size_t unfrozen = 0;
    for (std::size_t f = 0; f < flows; ++f) {
      if (frozen[f]) continue;
      ++unfrozen;
      for (int l : flow_links[f]) ++active_on_link[static_cast<std::size_t>(l)];
    }
    if (unfrozen == 0) break;

    // Largest common increment before a demand or a link bound binds.
    double inc = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < flows; ++f)
      if (!frozen[f]) inc = std::min(inc, demand_bps[f] - rate[f]);
    for (std::size_t l = 0; l < capacity_bps.size(); ++l)
      if (active_on_link[l] > 0)
        inc = std::min(inc, (capacity_bps[l] - load[l]) / active_on_link[l]);
    inc = std::max(inc, 0.0);

    for (std::size_t f = 0; f < flows; ++f) {
      if (frozen[f]) continue;
      rate[f] += inc;
      for (int l : flow_links[f]) load[static_cast<std::size_t>(l)] += inc;
    }

    bool any_frozen = false;
    for (std::size_t f = 0; f < flows; ++f) {
      if (frozen[f]) continue;
      bool capped = rate[f] >= demand_bps[f] - kEps;
      bool bottlenecked = false;
      for (int l : flow_links[f]) {
        std::size_t li = static_cast<std::size_t>(l);
        if (load[li] >= capacity_bps[li] - kEps) bottlenecked = true;
      }
      if (capped || bottlenecked) {
        frozen[f] = 1;
        any_frozen = true;
      }
    }
    if (!any_frozen) break;  // unreachable when demands are finite
  }
  return rate;
}

}  // namespace tel
