#ifndef FQDYN_IO_HPP
#define FQDYN_IO_HPP

#include <string>

#include <json.hpp>

#include "fqdyn/stats.hpp"

namespace fqdyn {

using Json = nlohmann::ordered_json;

// Grammars (all throw ParseError):
//   field:   p | p^m | p^m:mod=<poly over F_p in x>
//   poly:    sums of terms c*x^k | c | x^k | x, with t the modulus root in
//            extension coefficients, e.g. (t+1)*x^2+t
//   element: a poly of degree 0, e.g. 2*t^2+t+1
//   map:     (g)/(h)
//   mobius:  [[a,b],[c,d]]
FieldPtr parse_field_spec(const std::string& s, uint64_t seed);
Poly parse_poly(const std::string& s, const FieldPtr& ctx);
FElem parse_element(const std::string& s, const FieldPtr& ctx);
RatMap parse_map(const std::string& s, const FieldPtr& ctx);
Mobius parse_mobius(const std::string& s, const FieldPtr& ctx);

// Canonical formatting; format(parse(s)) is idempotent.
std::string format_field_spec(const FieldCtx& ctx);
std::string format_element(const FElem& x);
std::string format_poly(const Poly& p);
std::string format_map(const RatMap& r);
std::string format_rat(const Rat& r);

Json rat_json(const Rat& r);
Json point_json(const ProjPoint& p);
Json crit_report_json(const CritReport& rep);
Json orbit_json(const OrbitRecord& orbit);
Json deficiency_json(const DeficiencyTable& table);
Json depth_table_json(const DepthTable& table);
Json stat_record_json(const StatRecord& rec);
Json growth_json(const GrowthReport& rep);
Json conjugacy_json(const ConjugacyCheck& chk);
Json reversed_orbit_json(const ReversedOrbit& ro);

std::string stats_csv_header();
std::string stats_csv_row(const StatRecord& rec);
std::string crit_report_csv(const CritReport& rep);

// Truncated preimage tree in DOT form, nodes labeled by extension degree.
std::string preimage_tree_dot(const RatMap& R, const FElem& alpha, int depth, const Caps& caps = {});

} // namespace fqdyn

#endif
