#include "d2dsim/csv.hpp"

#include <array>
#include <charconv>
#include <ostream>

namespace d2dsim {

std::string format_number(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepResult>& sweeps) {
  out << kSweepCsvHeader << '\n';
  for (const SweepResult& s : sweeps) {
    for (const SweepPoint& p : s.points) {
      out << s.scenario << ',' << s.label << ',' << s.n_cu << ',' << p.m_d2d << ','
          << format_number(p.mean_bpshz) << ',' << format_number(p.std_bpshz) << ','
          << format_number(p.min_bpshz) << ',' << format_number(p.max_bpshz) << ','
          << format_number(p.mean_served) << '\n';
    }
  }
}

void write_trials_csv(std::ostream& out, const std::vector<SweepResult>& sweeps) {
  out << kTrialsCsvHeader << '\n';
  for (const SweepResult& s : sweeps) {
    for (const TrialRecord& t : s.trials) {
      out << s.scenario << ',' << t.m_d2d << ',' << t.drop_index << ',' << t.seed << ','
          << format_number(t.sum_bpshz) << ',' << t.served << ',' << t.unserved << '\n';
    }
  }
}

void write_topology_csv(std::ostream& out, const CellLayout& layout, const Topology& topo) {
  out << kTopologyCsvHeader << '\n';
  auto row = [&](const char* role, std::size_t idx, Point2 p) {
    out << role << ',' << idx << ',' << format_number(p.x) << ',' << format_number(p.y) << '\n';
  };
  row("bs", 0, layout.bs_position);
  for (std::size_t i = 0; i < topo.cu_positions.size(); ++i) row("cu", i, topo.cu_positions[i]);
  for (std::size_t j = 0; j < topo.d2d_tx_positions.size(); ++j) {
    row("d2d_tx", j, topo.d2d_tx_positions[j]);
    row("d2d_rx", j, topo.d2d_rx_positions[j]);
  }
}

}  // namespace d2dsim
