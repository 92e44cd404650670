#pragma once

#include <string>
#include <vector>

namespace slicesim {

// One SNR-to-MCS row: the entry applies from snr_threshold_db up to the next
// row's threshold. bits_per_prb_tti is the payload one PRB carries in one TTI
// when this MCS is selected.
struct McsEntry {
    double snr_threshold_db;
    int mcs_index;
    int bits_per_prb_tti;
};

class McsTable {
  public:
    explicit McsTable(std::vector<McsEntry> entries);

    // Entry with the largest threshold <= snr_db. Below the lowest threshold
    // returns the out-of-range sentinel (mcs_index -1, 0 bits): no service.
    const McsEntry& lookup(double snr_db) const;

    const std::vector<McsEntry>& entries() const { return entries_; }
    int max_bits_per_prb_tti() const { return entries_.back().bits_per_prb_tti; }
    static const McsEntry& out_of_range() { return sentinel_; }

    // Default 15-entry table: CQI 1..15 SNR switching points with payload
    // bits = spectral efficiency x 168 resource elements per PRB per TTI.
    static McsTable lte_default();

    // Plain text rows: threshold_db mcs_index bits_per_prb_per_tti.
    // '#' starts a comment.
    static McsTable load(const std::string& path);

  private:
    std::vector<McsEntry> entries_;
    static const McsEntry sentinel_;
};

}  // namespace slicesim
