#include "fqdyn/io.hpp"

#include <cctype>
#include <sstream>

namespace fqdyn {

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct Lexer {
    std::string src;
    size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) raise(Errc::ParseError, std::string("expected '") + c + "' in '" + src + "'");
    }
    int64_t integer() {
        skip_ws();
        size_t start = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        if (start == pos) raise(Errc::ParseError, "expected an integer in '" + src + "'");
        int64_t v = 0;
        for (size_t i = start; i < pos; ++i) {
            v = v * 10 + (src[i] - '0');
            if (v > (int64_t(1) << 40)) raise(Errc::ParseError, "integer too large");
        }
        return v;
    }
};

// poly grammar: expr := ['-'] term (('+'|'-') term)*
//               term := factor ('*' factor)*
//               factor := INT | x ['^' INT] | t ['^' INT] | '(' expr ')'
class PolyParser {
  public:
    PolyParser(Lexer& lx, FieldPtr ctx) : lx_(lx), ctx_(std::move(ctx)) {}

    Poly expr() {
        Poly acc = lx_.accept('-') ? -term() : term();
        for (;;) {
            if (lx_.accept('+'))
                acc = acc + term();
            else if (lx_.accept('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

  private:
    Poly term() {
        Poly acc = factor();
        while (lx_.accept('*')) acc = acc * factor();
        return acc;
    }

    Poly factor() {
        char c = lx_.peek();
        if (c == '(') {
            lx_.expect('(');
            Poly inner = expr();
            lx_.expect(')');
            return inner;
        }
        if (c == 'x' || c == 't') {
            ++lx_.pos;
            int64_t e = 1;
            if (lx_.accept('^')) e = lx_.integer();
            if (e < 0 || e > 1000000) raise(Errc::ParseError, "exponent out of range");
            if (c == 'x') {
                Poly p = Poly::one(ctx_);
                return p.shifted(int(e));
            }
            if (ctx_->m() == 1 && e > 0)
                raise(Errc::ParseError, "t is not available over a prime field");
            return Poly::constant(ctx_->gen().pow(uint64_t(e)));
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return Poly::constant(ctx_->from_int(lx_.integer()));
        raise(Errc::ParseError, "unexpected character '" + std::string(1, c) + "'");
    }

    Lexer& lx_;
    FieldPtr ctx_;
};

} // namespace

Poly parse_poly(const std::string& s, const FieldPtr& ctx) {
    Lexer lx{s};
    PolyParser pp(lx, ctx);
    Poly p = pp.expr();
    if (!lx.eof()) raise(Errc::ParseError, "trailing input in polynomial '" + s + "'");
    return p;
}

FElem parse_element(const std::string& s, const FieldPtr& ctx) {
    Poly p = parse_poly(s, ctx);
    if (p.degree() > 0) raise(Errc::ParseError, "element literal must not involve x: '" + s + "'");
    return p.coeff(0);
}

RatMap parse_map(const std::string& s, const FieldPtr& ctx) {
    Lexer lx{s};
    lx.expect('(');
    PolyParser pp(lx, ctx);
    Poly g = pp.expr();
    lx.expect(')');
    lx.expect('/');
    lx.expect('(');
    Poly h = pp.expr();
    lx.expect(')');
    if (!lx.eof()) raise(Errc::ParseError, "trailing input in map '" + s + "'");
    return RatMap(g, h);
}

Mobius parse_mobius(const std::string& s, const FieldPtr& ctx) {
    Lexer lx{s};
    auto element = [&]() {
        PolyParser pp(lx, ctx);
        Poly p = pp.expr();
        if (p.degree() > 0) raise(Errc::ParseError, "matrix entries must be elements");
        return p.coeff(0);
    };
    lx.expect('[');
    lx.expect('[');
    FElem a = element();
    lx.expect(',');
    FElem b = element();
    lx.expect(']');
    lx.expect(',');
    lx.expect('[');
    FElem c = element();
    lx.expect(',');
    FElem d = element();
    lx.expect(']');
    lx.expect(']');
    if (!lx.eof()) raise(Errc::ParseError, "trailing input in matrix '" + s + "'");
    Mobius A{a, b, c, d};
    if (A.det().is_zero()) raise(Errc::SingularMatrix, "matrix is singular");
    return A;
}

FieldPtr parse_field_spec(const std::string& s, uint64_t seed) {
    Lexer lx{s};
    int64_t p = lx.integer();
    if (lx.eof()) return prime_field(p);
    lx.expect('^');
    int64_t m = lx.integer();
    if (m < 1 || m > 4096) raise(Errc::ParseError, "extension degree out of range");
    if (lx.eof()) return extension(prime_field(p), int(m), seed);
    lx.expect(':');
    for (const char* kw = "mod="; *kw; ++kw) lx.expect(*kw);
    std::string rest = lx.src.substr(lx.pos);
    auto base = prime_field(p);
    Poly mod = parse_poly(rest, base);
    if (mod.degree() != m) raise(Errc::ParseError, "modulus degree does not match the field spec");
    std::vector<int64_t> coeffs;
    for (int i = 0; i <= mod.degree(); ++i) coeffs.push_back(mod.coeff(i).coeffs()[0]);
    return field_with_modulus(p, std::move(coeffs), seed);
}

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

std::string format_element(const FElem& x) {
    const auto& c = x.coeffs();
    std::string out;
    for (int i = int(c.size()) - 1; i >= 0; --i) {
        int64_t v = c[size_t(i)];
        if (v == 0) continue;
        if (!out.empty()) out += "+";
        if (i == 0) {
            out += std::to_string(v);
        } else {
            if (v != 1) out += std::to_string(v) + "*";
            out += "t";
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out.empty() ? "0" : out;
}

std::string format_poly(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (int i = p.degree(); i >= 0; --i) {
        FElem c = p.coeff(i);
        if (c.is_zero()) continue;
        if (!out.empty()) out += "+";
        std::string cs = format_element(c);
        bool needs_parens = cs.find('+') != std::string::npos;
        if (i == 0) {
            out += needs_parens ? "(" + cs + ")" : cs;
            continue;
        }
        if (cs != "1") {
            out += needs_parens ? "(" + cs + ")" : cs;
            out += "*";
        }
        out += "x";
        if (i > 1) out += "^" + std::to_string(i);
    }
    return out;
}

std::string format_map(const RatMap& r) { return "(" + format_poly(r.num()) + ")/(" + format_poly(r.den()) + ")"; }

std::string format_field_spec(const FieldCtx& ctx) {
    if (ctx.m() == 1) return std::to_string(ctx.p());
    return std::to_string(ctx.p()) + "^" + std::to_string(ctx.m());
}

std::string format_rat(const Rat& r) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(r) << "/" << boost::multiprecision::denominator(r);
    return os.str();
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

Json rat_json(const Rat& r) {
    std::ostringstream num, den;
    num << boost::multiprecision::numerator(r);
    den << boost::multiprecision::denominator(r);
    return Json{{"num", num.str()}, {"den", den.str()}};
}

Json point_json(const ProjPoint& p) {
    if (p.is_infinity()) return Json("inf");
    return Json(format_element(p.value()));
}

Json crit_report_json(const CritReport& rep) {
    Json j;
    j["alpha"] = format_element(rep.alpha);
    j["alpha_field"] = format_field_spec(*rep.alpha.ctx());
    j["e"] = rep.e;
    j["d"] = rep.d;
    j["dprime"] = rep.dprime;
    j["periodic"] = rep.periodic;
    j["N"] = rep.N ? Json(*rep.N) : Json(nullptr);
    j["c"] = rep.outside_scope ? Json(nullptr) : rat_json(rep.c);
    j["critical"] = rep.critical;
    j["family"] = family_name(rep.family);
    j["flags"] = Json{{"cycle_through_infinity", rep.flags.cycle_through_infinity},
                      {"trivial_in_reversed_orbit", rep.flags.trivial_in_reversed_orbit}};
    Json ro;
    switch (rep.reversed_orbit_finite) {
        case Finiteness::Finite: ro["finite"] = true; break;
        case Finiteness::Infinite: ro["finite"] = false; break;
        case Finiteness::Unknown: ro["finite"] = nullptr; break;
    }
    Json elems = Json::array();
    for (const auto& x : rep.reversed_orbit_elements) elems.push_back(format_element(x));
    ro["elements"] = elems;
    j["reversed_orbit"] = ro;
    if (rep.outside_scope) j["outside_scope"] = true;
    return j;
}

Json orbit_json(const OrbitRecord& orbit) {
    Json j;
    Json pts = Json::array();
    for (const auto& p : orbit.points) pts.push_back(point_json(p));
    j["points"] = pts;
    j["tail_len"] = orbit.tail_len;
    j["cycle_len"] = orbit.cycle_len;
    Json cyc = Json::array();
    for (const auto& p : orbit.cycle) cyc.push_back(point_json(p));
    j["cycle"] = cyc;
    j["contains_infinity"] = orbit.contains_infinity;
    return j;
}

Json deficiency_json(const DeficiencyTable& table) {
    Json j;
    j["d"] = table.d;
    j["dprime"] = table.dprime;
    Json entries = Json::array();
    for (const auto& e : table.entries) {
        entries.push_back(Json{{"gamma", format_element(e.gamma)},
                               {"ext_degree", e.ext_degree},
                               {"T", e.T},
                               {"r", e.r},
                               {"weight", e.weight},
                               {"is_trivial", e.is_trivial}});
    }
    j["entries"] = entries;
    return j;
}

Json depth_table_json(const DepthTable& table) {
    Json j;
    j["d"] = table.d;
    j["periodic"] = table.periodic;
    Json rows = Json::array();
    for (const auto& row : table.rows) {
        Json n;
        for (const auto& [depth, w] : row.n) n[std::to_string(depth)] = w;
        rows.push_back(Json{{"alpha_i", format_element(row.alpha_i)}, {"n", n}});
    }
    j["rows"] = rows;
    return j;
}

Json stat_record_json(const StatRecord& rec) {
    return Json{{"n", rec.n},       {"delta", rec.delta}, {"M", rec.M},
                {"N", rec.Ncount},  {"A", rat_json(rec.A)}};
}

Json growth_json(const GrowthReport& rep) {
    Json j;
    Json recs = Json::array();
    for (const auto& r : rep.records) recs.push_back(stat_record_json(r));
    j["records"] = recs;
    Json fits;
    for (const auto& [name, fit] : rep.fits) {
        fits[name] = Json{{"exp_base", fit.exp_base},
                          {"lin_slope", fit.lin_slope},
                          {"exp_residual", fit.exp_residual},
                          {"lin_residual", fit.lin_residual},
                          {"verdict", fit.verdict}};
    }
    j["fits"] = fits;
    j["product_bound_ok"] = rep.product_bound_ok;
    j["log_lower_bound_ok"] = rep.log_lower_bound_ok;
    return j;
}

Json conjugacy_json(const ConjugacyCheck& chk) {
    Json j;
    Json l = Json::array(), r = Json::array();
    for (const auto& rec : chk.lhs) l.push_back(stat_record_json(rec));
    for (const auto& rec : chk.rhs) r.push_back(stat_record_json(rec));
    j["lhs"] = l;
    j["rhs"] = r;
    j["equal"] = chk.equal;
    return j;
}

Json reversed_orbit_json(const ReversedOrbit& ro) {
    Json j;
    switch (ro.finite) {
        case Finiteness::Finite: j["finite"] = true; break;
        case Finiteness::Infinite: j["finite"] = false; break;
        case Finiteness::Unknown: j["finite"] = nullptr; break;
    }
    Json elems = Json::array();
    for (const auto& x : ro.elements) elems.push_back(format_element(x));
    j["elements"] = elems;
    return j;
}

// ---------------------------------------------------------------------------
// CSV and DOT
// ---------------------------------------------------------------------------

std::string stats_csv_header() { return "n,delta,M,N,A_num,A_den"; }

std::string stats_csv_row(const StatRecord& rec) {
    std::ostringstream os;
    os << rec.n << "," << rec.delta << "," << rec.M << "," << rec.Ncount << ","
       << boost::multiprecision::numerator(rec.A) << "," << boost::multiprecision::denominator(rec.A);
    return os.str();
}

std::string crit_report_csv(const CritReport& rep) {
    std::ostringstream os;
    os << "alpha,e,d,dprime,periodic,N,c_num,c_den,critical,family,cycle_through_infinity,"
          "trivial_in_reversed_orbit,reversed_orbit_finite\n";
    os << format_element(rep.alpha) << "," << rep.e << "," << rep.d << "," << rep.dprime << ","
       << (rep.periodic ? "true" : "false") << "," << (rep.N ? std::to_string(*rep.N) : "") << ",";
    if (rep.outside_scope)
        os << ",";
    else
        os << boost::multiprecision::numerator(rep.c) << "," << boost::multiprecision::denominator(rep.c);
    os << "," << (rep.critical ? "true" : "false") << "," << family_name(rep.family) << ","
       << (rep.flags.cycle_through_infinity ? "true" : "false") << ","
       << (rep.flags.trivial_in_reversed_orbit ? "true" : "false") << ",";
    switch (rep.reversed_orbit_finite) {
        case Finiteness::Finite: os << "finite"; break;
        case Finiteness::Infinite: os << "infinite"; break;
        case Finiteness::Unknown: os << "unknown"; break;
    }
    return os.str();
}

std::string preimage_tree_dot(const RatMap& R, const FElem& alpha, int depth, const Caps& caps) {
    (void)caps;
    std::ostringstream os;
    os << "digraph preimages {\n  rankdir=BT;\n";
    struct Node {
        FElem value;
        int parent;
        int id;
    };
    std::vector<Node> nodes{{alpha, -1, 0}};
    const int m0 = R.ctx()->m();
    size_t level_begin = 0, next_id = 1;
    for (int d = 0; d < depth; ++d) {
        size_t level_end = nodes.size();
        for (size_t i = level_begin; i < level_end; ++i) {
            Poly g = lift(R.num(), nodes[i].value.ctx());
            Poly h = lift(R.den(), nodes[i].value.ctx());
            Poly F = g - h * nodes[i].value;
            if (F.degree() < 1) continue;
            for (auto& grp : roots_in_closure(F))
                for (auto& r : grp.roots) nodes.push_back({r, int(i), int(next_id++)});
        }
        level_begin = level_end;
    }
    for (const auto& node : nodes) {
        int deg = minimal_degree(node.value, m0);
        os << "  n" << node.id << " [label=\"";
        if (node.value.ctx()->m() == m0) os << format_element(node.value) << " ";
        os << "deg=" << deg << "\"];\n";
        if (node.parent >= 0) os << "  n" << node.id << " -> n" << node.parent << ";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace fqdyn
