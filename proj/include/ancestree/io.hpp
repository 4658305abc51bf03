// Deterministic serialization helpers: shortest round-trip number formatting
// and the CSV / event-log emitters shared by the CLI and tests.
#pragma once

#include <iosfwd>
#include <string>

#include "ancestree/asg.hpp"
#include "ancestree/coeffs.hpp"
#include "ancestree/ldasg.hpp"
#include "ancestree/types.hpp"

namespace ancestree {

// Shortest decimal string that parses back to the same double ("inf",
// "-inf", "nan" for non-finite values).
std::string fmt_double(double v);

// CSV emitters; headers are fixed per quantity.
void write_trajectory_csv(std::ostream& os, const Trajectory& t);       // t,state
void write_pmf_csv(std::ostream& os, const Pmf& pmf, const char* key);  // <key>,prob
void write_coefficients_csv(std::ostream& os, const CoefficientVector& a);  // n,a
void write_h_table_csv(std::ostream& os, const AncestorTable& h);           // k,h

// Line-oriented event logs: "beta kind src dst" for arrows and
// "beta mut0 line" / "beta mut1 line" for mutations.
void write_asg_event_log(std::ostream& os, const ASGRealisation& r);
void write_ld_event_log(std::ostream& os, const LDPath& path);

const char* ld_event_tag(LDEventKind kind);

}  // namespace ancestree
