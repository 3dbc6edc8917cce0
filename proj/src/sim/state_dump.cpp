#include "qmg/sim/state_dump.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace qmg::sim {

namespace {

std::string field_text(const BasisLabel& label, const Register& r) {
  if (r.width <= 64) return fmt::format("{}", label.field(r.offset, r.width));
  BasisLabel part(r.width);
  for (std::size_t done = 0; done < r.width; done += 64) {
    const std::size_t w = std::min<std::size_t>(64, r.width - done);
    part.set_field(done, w, label.field(r.offset + done, w));
  }
  return "0x" + part.to_hex();
}

}  // namespace

void write_state_csv(std::ostream& out, const SparseState& state) {
  out << "label";
  for (const auto& r : state.layout().registers()) out << ',' << r.name;
  out << ",re,im\n";
  for (const auto& b : state.branches()) {
    out << b.label.to_hex();
    for (const auto& r : state.layout().registers()) out << ',' << field_text(b.label, r);
    out << fmt::format(",{:.17g},{:.17g}\n", b.amplitude.real(), b.amplitude.imag());
  }
}

}  // namespace qmg::sim
