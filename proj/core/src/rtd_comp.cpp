#include "locan/rtd_comp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace locan {

std::uint32_t rtd_units_from_km(double km) {
    if (!(km > 0.0)) return 0;
    const double units = std::round(km / kRtdUnitKm);
    if (units >= static_cast<double>(std::numeric_limits<std::uint32_t>::max())) {
        return std::numeric_limits<std::uint32_t>::max();
    }
    return static_cast<std::uint32_t>(units);
}

double rtd_projection_km(std::optional<std::uint32_t> rtd_units,
                         std::optional<double> theta_deg) {
    if (!rtd_units || !theta_deg) return 0.0;
    return rtd_distance_km(*rtd_units) * std::cos(*theta_deg * std::numbers::pi / 180.0);
}

void QueueParams::validate() const {
    if (capacity_n == 0) {
        throw std::invalid_argument("queue capacity_n must be positive");
    }
    if (tolerance_m >= capacity_n) {
        throw std::invalid_argument("queue tolerance_m must be < capacity_n");
    }
}

CompensationQueue::CompensationQueue(QueueParams params) : params_(params) {
    params_.validate();
}

void CompensationQueue::push(double c_in_km) {
    if (fifo_.size() == params_.capacity_n) {
        ordered_.erase(ordered_.find(fifo_.front()));
        fifo_.pop_front();
    }
    fifo_.push_back(c_in_km);
    ordered_.insert(c_in_km);
}

double CompensationQueue::read_c_out() const {
    if (fifo_.size() < params_.tolerance_m + 1) {
        return params_.init_value_km;
    }
    auto it = ordered_.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(params_.tolerance_m));
    return *it;
}

CompensationStore::CompensationStore(QueueParams params) : params_(params) {
    params_.validate();
}

CompensationQueue& CompensationStore::queue_for(const std::string& cell_id) {
    auto it = queues_.find(cell_id);
    if (it == queues_.end()) {
        it = queues_.emplace(cell_id, CompensationQueue(params_)).first;
    }
    return it->second;
}

const CompensationQueue* CompensationStore::find(const std::string& cell_id) const {
    auto it = queues_.find(cell_id);
    return it == queues_.end() ? nullptr : &it->second;
}

void CompensationStore::dump_csv(std::ostream& out) const {
    std::vector<const std::string*> ids;
    ids.reserve(queues_.size());
    for (const auto& [id, q] : queues_) ids.push_back(&id);
    std::sort(ids.begin(), ids.end(), [](const auto* a, const auto* b) { return *a < *b; });
    for (const auto* id : ids) {
        out << *id;
        for (const double v : queues_.at(*id).samples()) out << ',' << v;
        out << '\n';
    }
}

double compute_c_in(const Transition& tr, double rtd_proj_prev_km, double rtd_proj_next_km,
                    double v_max_kmh) {
    const double d_ue_max_km = v_max_kmh * (tr.elapsed_s / 3600.0);
    return tr.cell_distance_km - d_ue_max_km - rtd_proj_next_km - rtd_proj_prev_km;
}

} // namespace locan
