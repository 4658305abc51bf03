#include "ancestree/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "ancestree/errors.hpp"

namespace ancestree {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  os << "t,state\n";
  for (std::size_t i = 0; i < t.times.size(); ++i)
    os << fmt_double(t.times[i]) << ',' << fmt_double(t.states[i]) << '\n';
}

void write_pmf_csv(std::ostream& os, const Pmf& pmf, const char* key) {
  os << key << ",prob\n";
  for (std::size_t i = 0; i < pmf.prob.size(); ++i)
    os << pmf.min_state + static_cast<int>(i) << ',' << fmt_double(pmf.prob[i])
       << '\n';
}

void write_coefficients_csv(std::ostream& os, const CoefficientVector& a) {
  os << "n,a\n";
  for (std::size_t n = 0; n < a.a.size(); ++n)
    os << n << ',' << fmt_double(a.a[n]) << '\n';
}

void write_h_table_csv(std::ostream& os, const AncestorTable& h) {
  os << "k,h\n";
  for (std::size_t k = 0; k < h.h.size(); ++k)
    os << k << ',' << fmt_double(h.h[k]) << '\n';
}

void write_asg_event_log(std::ostream& os, const ASGRealisation& r) {
  for (const ASGEvent& ev : r.events) {
    os << fmt_double(ev.time) << ' ';
    switch (ev.kind) {
      case ASGEventKind::SelectiveArrow:
        os << "sel " << ev.src << ' ' << ev.dst;
        break;
      case ASGEventKind::NeutralArrow:
        os << "neu " << ev.src << ' ' << ev.dst;
        break;
      case ASGEventKind::Mut0:
        os << "mut0 " << ev.src;
        break;
      case ASGEventKind::Mut1:
        os << "mut1 " << ev.src;
        break;
    }
    os << '\n';
  }
}

const char* ld_event_tag(LDEventKind kind) {
  switch (kind) {
    case LDEventKind::Branch: return "branch";
    case LDEventKind::Coal: return "coal";
    case LDEventKind::Coll: return "coll";
    case LDEventKind::XColl: return "xcoll";
    case LDEventKind::Mut0: return "mut0";
    case LDEventKind::Mut1: return "mut1";
  }
  fail(Errc::InternalError, "unknown event kind");
}

void write_ld_event_log(std::ostream& os, const LDPath& path) {
  for (const LDEvent& ev : path.events) {
    os << fmt_double(ev.time) << ' ' << ld_event_tag(ev.kind) << ' ' << ev.i;
    if (ev.kind == LDEventKind::Coal || ev.kind == LDEventKind::Coll ||
        ev.kind == LDEventKind::XColl)
      os << ' ' << ev.j;
    os << '\n';
  }
}

}  // namespace ancestree
