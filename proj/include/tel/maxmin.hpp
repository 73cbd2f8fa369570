#ifndef TEL_MAXMIN_HPP
#define TEL_MAXMIN_HPP

#include <vector>

namespace tel {

/// Progressive-filling max-min fair allocation. Every flow's rate is
/// raised together until it hits its own demand or a link saturates;
/// flows on saturated links freeze and the rest continue. The result is
/// max-min fair: no flow can be increased without decreasing a flow
/// with an equal or smaller rate.
///
/// capacity_bps: per link; flow_links: link indices each flow crosses;
/// demand_bps: per-flow cap. Returns per-flow rates.
std::vector<double> max_min_allocate(const std::vector<double>& capacity_bps,
                                     const std::vector<std::vector<int>>& flow_links,
                                     const std::vector<double>& demand_bps);

}  // namespace tel

#endif  // TEL_MAXMIN_HPP
