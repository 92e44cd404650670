#include "slicesim/mcs.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slicesim {

const McsEntry McsTable::sentinel_{-1e300, -1, 0};

McsTable::McsTable(std::vector<McsEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw std::invalid_argument("mcs table: no entries");
    }
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        if (entries_[i].snr_threshold_db <= entries_[i - 1].snr_threshold_db) {
            throw std::invalid_argument("mcs table: thresholds must be strictly increasing");
        }
        if (entries_[i].bits_per_prb_tti < entries_[i - 1].bits_per_prb_tti) {
            throw std::invalid_argument("mcs table: bits per PRB must be non-decreasing");
        }
    }
    for (const auto& e : entries_) {
        if (e.bits_per_prb_tti <= 0) {
            throw std::invalid_argument("mcs table: bits per PRB must be positive");
        }
    }
}

const McsEntry& McsTable::lookup(double snr_db) const {
    if (snr_db < entries_.front().snr_threshold_db) {
        return sentinel_;
    }
    auto it = std::upper_bound(entries_.begin(), entries_.end(), snr_db,
                               [](double v, const McsEntry& e) { return v < e.snr_threshold_db; });
    return *(it - 1);
}

McsTable McsTable::lte_default() {
    // SNR switching points from a published CQI-to-SINR mapping (link-level
    // 10% BLER thresholds); payload = CQI spectral efficiency x 168 REs.
    return McsTable({
        {-6.936, 1, 26},    // QPSK 78/1024
        {-5.147, 2, 39},    // QPSK 120/1024
        {-3.180, 3, 63},    // QPSK 193/1024
        {-1.254, 4, 101},   // QPSK 308/1024
        {0.761, 5, 147},    // QPSK 449/1024
        {2.700, 6, 198},    // QPSK 602/1024
        {4.697, 7, 248},    // 16QAM 378/1024
        {6.528, 8, 322},    // 16QAM 490/1024
        {8.576, 9, 404},    // 16QAM 616/1024
        {10.370, 10, 459},  // 64QAM 466/1024
        {12.300, 11, 558},  // 64QAM 567/1024
        {14.180, 12, 656},  // 64QAM 666/1024
        {15.890, 13, 760},  // 64QAM 772/1024
        {17.820, 14, 859},  // 64QAM 873/1024
        {19.830, 15, 933},  // 64QAM 948/1024
    });
}

McsTable McsTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("mcs table: cannot open " + path);
    }
    std::vector<McsEntry> rows;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        McsEntry e{};
        if (ls >> e.snr_threshold_db >> e.mcs_index >> e.bits_per_prb_tti) {
            rows.push_back(e);
        }
    }
    return McsTable(std::move(rows));
}

}  // namespace slicesim
