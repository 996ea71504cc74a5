#include "henselkit/job.hpp"

#include "henselkit/diff_fields.hpp"
#include "henselkit/hensel.hpp"
#include "henselkit/padic.hpp"
#include "henselkit/poly_text.hpp"
#include "henselkit/series.hpp"
#include "henselkit/subgroup.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <functional>
#include <optional>

namespace hk {

namespace {

using json = nlohmann::ordered_json;

constexpr std::size_t kWitnessSamples = 50;
constexpr std::size_t kOperatorSamples = 24;
constexpr std::size_t kAxiomSamples = 8;

class VerificationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\n");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\n");
    return s.substr(a, b - a + 1);
}

std::int64_t parse_int(const std::string& text, const std::string& what) {
    std::string s = trim(text);
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw ParseError(what + ": '" + text + "' is not an integer");
    }
    if (used != s.size()) throw ParseError(what + ": '" + text + "' is not an integer");
    return v;
}

Rational parse_rat(const std::string& text, const std::string& what) {
    try {
        return parse_rational(trim(text));
    } catch (const Error&) {
        throw ParseError(what + ": '" + text + "' is not a rational number");
    }
}

struct Ground {
    enum class Kind { PAdic, Series, VDField, Rosenlicht } kind = Kind::PAdic;
    std::string text;
    std::uint32_t p = 0;
    CoeffField field = CoeffField::rationals();
    std::int64_t den = 1;
    Rational N;
    std::uint32_t degree_cap = kDefaultDegreeCap;  // vdfield: largest residue tower degree
};

Ground parse_ground(const std::string& raw) {
    std::string text;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) text += c;
    auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')')
        throw ParseError("ground '" + raw + "' is not of the form name(args)");
    std::string name = text.substr(0, open);
    std::vector<std::string> args;
    std::string inner = text.substr(open + 1, text.size() - open - 2);
    std::size_t start = 0;
    while (true) {
        auto comma = inner.find(',', start);
        args.push_back(inner.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    auto need = [&](std::size_t k, const std::string& shape) {
        if (args.size() != k) throw ParseError("ground " + name + " takes " + shape);
    };
    auto prime = [&](const std::string& s) {
        std::int64_t p = parse_int(s, "ground prime");
        if (p < 2 || p >= 65536 || !is_prime_u32(static_cast<std::uint32_t>(p)))
            throw ParseError("ground prime " + s + " is not a prime below 65536");
        return static_cast<std::uint32_t>(p);
    };
    auto positive = [&](const std::string& s, const std::string& what) {
        std::int64_t v = parse_int(s, what);
        if (v <= 0) throw ParseError(what + " must be positive");
        return v;
    };
    Ground g;
    if (name == "padic") {
        need(2, "(p, N)");
        g.kind = Ground::Kind::PAdic;
        g.p = prime(args[0]);
        g.N = positive(args[1], "p-adic precision");
        g.text = fmt::format("padic({}, {})", g.p, args[1]);
    } else if (name == "series") {
        need(3, "(field, d, N)");
        g.kind = Ground::Kind::Series;
        g.field = CoeffField::parse(args[0]);
        g.den = positive(args[1], "exponent denominator");
        g.N = parse_rat(args[2], "series precision");
        g.text = fmt::format("series({}, {}, {})", g.field.to_string(), g.den, rational_to_string(g.N));
    } else if (name == "vdfield") {
        if (args.size() != 2 && args.size() != 3) throw ParseError("ground vdfield takes (p, N) or (p, N, m)");
        g.kind = Ground::Kind::VDField;
        g.p = prime(args[0]);
        g.field = CoeffField::finite(g.p);
        g.N = positive(args[1], "series precision");
        g.text = fmt::format("vdfield({}, {})", g.p, args[1]);
        if (args.size() == 3) {
            g.degree_cap = static_cast<std::uint32_t>(positive(args[2], "residue degree cap"));
            g.text = fmt::format("vdfield({}, {}, {})", g.p, args[1], g.degree_cap);
        }
    } else if (name == "rosenlicht") {
        need(2, "(d, N)");
        g.kind = Ground::Kind::Rosenlicht;
        g.den = positive(args[0], "exponent denominator");
        g.N = parse_rat(args[1], "series precision");
        g.text = fmt::format("rosenlicht({}, {})", g.den, rational_to_string(g.N));
    } else {
        throw ParseError("unknown ground '" + name + "' (expected padic, series, vdfield or rosenlicht)");
    }
    if (!(g.N > Rational(0))) throw ParseError("ground precision must be positive");
    return g;
}

class Flags {
public:
    explicit Flags(const JobSpec& s) : s_(s) {}
    std::optional<std::string> get(const std::string& key) const {
        auto it = s_.flags.find(key);
        if (it == s_.flags.end()) return std::nullopt;
        return it->second;
    }
    std::string need(const std::string& key, const std::string& command) const {
        auto v = get(key);
        if (!v) throw UsageError(command + " needs --" + key);
        return *v;
    }

private:
    const JobSpec& s_;
};

std::vector<std::string> split_list(const std::string& text, char sep = ';') {
    std::vector<std::string> out;
    for (auto& part : split_top_level(text, sep)) {
        std::string t = trim(part);
        if (t.empty()) throw ParseError("empty entry in '" + text + "'");
        out.push_back(t);
    }
    return out;
}

template <class R>
struct RingIO {
    std::function<R(const std::string&)> parse;
    R zero;

    MultiPoly<R> poly(const std::string& text, std::size_t nvars) const {
        return parse_poly<R>(text, nvars, zero, parse);
    }
    Vec<R> vec(const std::string& text) const {
        Vec<R> out;
        for (const auto& s : split_list(text)) out.push_back(parse(s));
        return out;
    }
};

int precision_digits(const Rational& N) {
    if (N.denominator() != 1) throw ParseError("p-adic precision must be an integer");
    return static_cast<int>(N.numerator());
}

RingIO<PAdic> padic_io(const Ground& g) {
    int N = precision_digits(g.N);
    std::uint32_t p = g.p;
    return {[p, N](const std::string& s) { return PAdic::parse(s, p, N); }, PAdic(p, N)};
}

RingIO<Series> series_io(const CoeffField& field, std::int64_t den, const Rational& N) {
    return {[field, den, N](const std::string& s) { return Series::parse(s, field, den, N); }, Series(field, den, N)};
}

json steps_json(const std::vector<LiftStep>& steps) {
    json arr = json::array();
    for (std::size_t i = 0; i < steps.size(); ++i)
        arr.push_back(json{{"step", std::to_string(i + 1)},
                           {"before", steps[i].before.to_string()},
                           {"after", steps[i].after.to_string()}});
    return arr;
}

template <class P>
json certificate_json(const LiftCertificate<P>& c) {
    return json{{"outcome", to_string(c.outcome)},
                {"steps", steps_json(c.steps)},
                {"strictly_increasing", c.strictly_increasing()},
                {"final_residual", c.final_residual.to_string()},
                {"uniqueness_ball", c.uniqueness_ball.describe()}};
}

json verification_json(const Value& fresh, const Value& required) {
    bool ok = fresh >= required;
    json j{{"reparsed", true}, {"fresh_residual_value", fresh.to_string()}, {"required", required.to_string()}, {"passed", ok}};
    if (!ok)
        throw VerificationFailure("re-parsed solution has residual value " + fresh.to_string() + " < " + required.to_string());
    return j;
}

void add_root(json& result, const std::string& key, const PAdic& a) {
    result[key] = a.to_string();
    result[key + "_integer"] = a.residue().get_str();
}

void add_root(json& result, const std::string& key, const Series& a) { result[key] = a.to_string(); }

template <class R>
void add_root(json& result, const std::string& key, const Vec<R>& a) {
    json arr = json::array();
    for (const auto& x : a) arr.push_back(x.to_string());
    result[key] = arr;
}

template <class R>
Vec<R> reparse_vec(const RingIO<R>& io, const Vec<R>& a) {
    Vec<R> out;
    for (const auto& x : a) out.push_back(io.parse(x.to_string()));
    return out;
}

template <class R, class P>
void add_newton_fields(json& result, const NewtonLift<R, P>& lift) {
    result["start_residual"] = lift.start_residual.to_string();
    result["slope_value"] = lift.slope_value.to_string();
    result["working_precision"] = lift.working_precision.to_string();
    if (lift.witness) result["pseudo_slope_pairs_checked"] = std::to_string(lift.witness->samples_checked);
}

template <class R>
std::vector<MultiPoly<R>> parse_system(const RingIO<R>& io, const std::string& text, std::size_t nvars) {
    std::vector<MultiPoly<R>> out;
    for (const auto& s : split_list(text)) out.push_back(io.poly(s, nvars));
    return out;
}

template <class R>
Matrix<R> parse_matrix(const RingIO<R>& io, const std::string& text, std::size_t n) {
    auto rows = split_list(text);
    if (rows.size() != n) throw ParseError("matrix needs " + std::to_string(n) + " rows separated by ';'");
    Matrix<R> m(n, io.zero);
    for (std::size_t i = 0; i < n; ++i) {
        auto cells = split_list(rows[i], ',');
        if (cells.size() != n) throw ParseError("matrix row " + std::to_string(i) + " needs " + std::to_string(n) + " entries");
        for (std::size_t j = 0; j < n; ++j) m(i, j) = io.parse(cells[j]);
    }
    return m;
}

struct Context {
    const Ground& ground;
    const Flags& flags;
    Value precision;
    std::uint64_t seed;
    json& doc;
};

// ---------------------------------------------------------------- generic lifts

template <class R>
void run_lift1d(const RingIO<R>& io, Context& cx) {
    auto f = io.poly(cx.flags.need("poly", "lift1d"), 1);
    R b = io.parse(cx.flags.need("point", "lift1d"));
    auto lift = newton_1d(f, b, cx.precision, LiftOptions{kWitnessSamples, cx.seed});
    json result;
    add_root(result, "root", lift.root);
    result["displacement_value"] = (lift.root - b.with_precision(lift.root.precision())).valuation().to_string();
    add_newton_fields(result, lift);
    cx.doc["result"] = result;
    cx.doc["certificate"] = certificate_json(lift.certificate);
    R again = io.parse(lift.root.to_string());
    cx.doc["verification"] = verification_json(f.evaluate({again}).valuation(), cx.precision);
}

template <class R>
void run_liftnd(const RingIO<R>& io, Context& cx) {
    std::string polys = cx.flags.need("poly", "liftnd");
    Vec<R> b = io.vec(cx.flags.need("point", "liftnd"));
    auto f = parse_system(io, polys, b.size());
    if (f.size() != b.size()) throw UsageError("liftnd needs as many equations as point coordinates");
    auto lift = newton_nd(f, b, cx.precision, LiftOptions{kWitnessSamples, cx.seed});
    json result;
    add_root(result, "root", lift.root);
    result["displacement_value"] = value_of(lift.root - widen(b, cx.precision)).to_string();
    add_newton_fields(result, lift);
    cx.doc["result"] = result;
    cx.doc["certificate"] = certificate_json(lift.certificate);
    cx.doc["verification"] = verification_json(value_of(evaluate_system(f, reparse_vec(io, lift.root))), cx.precision);
}

template <class R>
void run_implicit(const RingIO<R>& io, Context& cx) {
    Vec<R> z = io.vec(cx.flags.need("point", "implicit"));
    Vec<R> xprime = io.vec(cx.flags.need("target", "implicit"));
    auto f = parse_system(io, cx.flags.need("poly", "implicit"), z.size());
    auto lift = implicit_fn(f, z, xprime, cx.precision, LiftOptions{kWitnessSamples, cx.seed});
    json result;
    add_root(result, "solution", lift.root);
    result["parameter_shift"] = lift.parameter_shift.to_string();
    result["det_value"] = lift.det_value.to_string();
    add_newton_fields(result, lift);
    cx.doc["result"] = result;
    cx.doc["certificate"] = certificate_json(lift.certificate);
    Vec<R> full = widen(xprime, cx.precision);
    for (const auto& y : reparse_vec(io, lift.root)) full.push_back(y);
    cx.doc["verification"] = verification_json(value_of(evaluate_system(f, full)), cx.precision);
}

template <class R>
void run_pinv(const RingIO<R>& io, Context& cx) {
    Vec<R> b = io.vec(cx.flags.need("point", "pinv-lift"));
    auto f = parse_system(io, cx.flags.need("poly", "pinv-lift"), b.size());
    if (f.size() != b.size()) throw UsageError("pinv-lift needs as many equations as point coordinates");
    Matrix<R> Mo = parse_matrix(io, cx.flags.need("matrix", "pinv-lift"), b.size());
    auto lift = pseudo_inverse_lift(f, b, Mo, cx.precision, LiftOptions{kWitnessSamples, cx.seed});
    json result;
    add_root(result, "root", lift.root);
    result["displacement_value"] = value_of(lift.root - widen(b, cx.precision)).to_string();
    add_newton_fields(result, lift);
    cx.doc["result"] = result;
    cx.doc["certificate"] = certificate_json(lift.certificate);
    cx.doc["verification"] = verification_json(value_of(evaluate_system(f, reparse_vec(io, lift.root))), cx.precision);
}

template <class R>
void run_invert(const RingIO<R>& io, Context& cx) {
    auto f = io.poly(cx.flags.need("poly", "invert-series"), 1);
    R z = io.parse(cx.flags.need("target", "invert-series"));
    auto lift = series_invert(f, z, cx.precision, LiftOptions{kWitnessSamples, cx.seed});
    json result;
    add_root(result, "inverse", lift.root);
    add_newton_fields(result, lift);
    cx.doc["result"] = result;
    cx.doc["certificate"] = certificate_json(lift.certificate);
    R again = io.parse(lift.root.to_string());
    cx.doc["verification"] = verification_json((f.evaluate({again}) - z).valuation(), cx.precision);
}

template <class R>
void run_generic(const std::string& command, const RingIO<R>& io, Context& cx) {
    if (command == "lift1d") return run_lift1d(io, cx);
    if (command == "liftnd") return run_liftnd(io, cx);
    if (command == "implicit") return run_implicit(io, cx);
    if (command == "pinv-lift") return run_pinv(io, cx);
    return run_invert(io, cx);
}

// ---------------------------------------------------------------- differential grounds

void require_ground(const Context& cx, Ground::Kind kind, const std::string& command, const std::string& shape) {
    if (cx.ground.kind != kind) throw UsageError(command + " runs over " + shape + ", not " + cx.ground.text);
}

json axioms_json(const AxiomReport& rep) {
    json j;
    for (const auto& c : rep.checks)
        j[c.name] = c.passed ? fmt::format("passed on {} samples", c.checked) : "FAILED: " + c.counterexample;
    if (!rep.all_passed()) throw HypothesisError("sampled axiom check failed", rep.to_string());
    return j;
}

VDFieldInstance vd_instance(const Ground& g) {
    VDFieldInstance inst;
    inst.p = g.p;
    inst.den = 1;
    inst.precision = g.N;
    inst.degree_cap = g.degree_cap;
    return inst;
}

RosenlichtInstance rosenlicht_instance(const Ground& g) {
    RosenlichtInstance inst;
    inst.den = g.den;
    inst.precision = g.N;
    return inst;
}

template <class F>
Value operator_residual(const MultiPoly<Series>& f, const Series& y, std::size_t n, F&& D_power) {
    Vec<Series> point;
    for (std::size_t i = 0; i <= n; ++i) point.push_back(D_power(y, i));
    return f.evaluate(point).valuation();
}

void run_dsolve(Context& cx) {
    require_ground(cx, Ground::Kind::VDField, "dsolve", "vdfield(p, N)");
    VDFieldInstance inst = vd_instance(cx.ground);
    Series target = inst.parse(cx.flags.need("target", "dsolve"));
    Series a = d_solve(inst, target, cx.precision);
    cx.doc["axioms"] = axioms_json(vd_axiom_report(inst, kAxiomSamples, cx.seed));
    cx.doc["result"] = json{{"solution", a.to_string()}};
    Series again = inst.parse(a.to_string());
    cx.doc["verification"] = verification_json((target - inst.D(again)).valuation(), cx.precision);
}

std::size_t operator_vars(const Context& cx, const std::string& poly) {
    if (auto n = cx.flags.get("ode-order")) {
        std::int64_t k = parse_int(*n, "--ode-order");
        if (k < 1) throw UsageError("--ode-order must be at least 1");
        return static_cast<std::size_t>(k) + 1;
    }
    std::size_t inferred = 0;
    for (const auto& [neg, factors] : detail::lex_poly_terms(poly))
        for (const auto& t : factors)
            if (t.kind == detail::PolyToken::Kind::Var) inferred = std::max(inferred, t.var + 1);
    return std::max<std::size_t>(inferred, 2);
}

template <class R>
json operator_lift_json(const OperatorLift<R>& lift, const std::string& root_key) {
    json result;
    result[root_key] = lift.root.to_string();
    result["start_residual"] = lift.start_residual.to_string();
    result["slope_value"] = lift.slope_value.to_string();
    json pv = json::array();
    for (const auto& v : lift.partial_values) pv.push_back(v.to_string());
    result["partial_values"] = pv;
    json corr = json::array();
    for (const auto& c : lift.corrections)
        corr.push_back(json{{"correction_value", c.first.to_string()}, {"image_value", c.second.to_string()}});
    result["corrections"] = corr;
    result["operator_samples_checked"] = std::to_string(lift.samples_checked);
    result["remainder_pairs_checked"] = std::to_string(lift.remainder_pairs_checked);
    return result;
}

void run_dhensel(Context& cx) {
    require_ground(cx, Ground::Kind::VDField, "dhensel", "vdfield(p, N)");
    VDFieldInstance inst = vd_instance(cx.ground);
    std::string text = cx.flags.need("poly", "dhensel");
    std::size_t nv = operator_vars(cx, text);
    RingIO<Series> io = series_io(inst.field(), 1, inst.precision);
    auto f = io.poly(text, nv);
    Series b = cx.flags.get("point") ? inst.parse(*cx.flags.get("point")) : inst.zero();
    auto lift = dhensel_solve(inst, f, b, cx.precision, OperatorOptions{kOperatorSamples, cx.seed});
    cx.doc["axioms"] = axioms_json(vd_axiom_report(inst, kAxiomSamples, cx.seed));
    cx.doc["result"] = operator_lift_json(lift, "root");
    cx.doc["certificate"] = certificate_json(lift.certificate);
    Series again = inst.parse(lift.root.to_string());
    cx.doc["verification"] = verification_json(
        operator_residual(f, again, nv - 1, [&](const Series& y, std::size_t i) { return inst.D_power(y, i); }),
        cx.precision);
}

void run_integrate(Context& cx) {
    require_ground(cx, Ground::Kind::Rosenlicht, "integrate", "rosenlicht(d, N)");
    RosenlichtInstance inst = rosenlicht_instance(cx.ground);
    Series target = inst.parse(cx.flags.need("target", "integrate"));
    Series a = integrate(inst, target, cx.precision);
    cx.doc["result"] = json{{"integral", a.to_string()}, {"leading_term", asymptotic_integrate(inst, target).to_string()}};
    Series again = inst.parse(a.to_string());
    Value need = std::min(cx.precision - Value(1), target.precision());
    cx.doc["verification"] = verification_json((again.derivative() - target).valuation(), need);
}

void run_ode(Context& cx) {
    require_ground(cx, Ground::Kind::Rosenlicht, "ode", "rosenlicht(d, N)");
    RosenlichtInstance inst = rosenlicht_instance(cx.ground);
    std::string text = cx.flags.need("poly", "ode");
    std::size_t nv = operator_vars(cx, text);
    RingIO<Series> io = series_io(inst.field(), inst.den, inst.precision);
    auto g = io.poly(text, nv);
    Series c = cx.flags.get("target") ? inst.parse(*cx.flags.get("target")) : inst.zero();
    Rational r = parse_rat(cx.flags.need("rate", "ode"), "--rate");
    std::optional<Series> start;
    if (auto s = cx.flags.get("point")) start = inst.parse(*s);
    auto sol = ode_solve(inst, g, c, r, cx.precision, OperatorOptions{kOperatorSamples, cx.seed}, start);
    cx.doc["axioms"] = axioms_json(rosenlicht_axiom_report(inst, kAxiomSamples, nv - 1, cx.seed));
    json result = operator_lift_json(sol.lift, "solution");
    result["regime"] = sol.regime;
    result["a_priori_value"] = sol.a_priori_value.to_string();
    result["tightest_witness"] = rational_to_string(sol.tightest_witness);
    cx.doc["result"] = result;
    cx.doc["certificate"] = certificate_json(sol.lift.certificate);
    std::size_t n = nv - 1;
    Series y = inst.parse(sol.lift.root.to_string());
    Vec<Series> point;
    for (std::size_t i = 0; i <= n; ++i) point.push_back(inst.D_power(y, i));
    Series residual = point[n] - g.evaluate(point) - c;
    cx.doc["verification"] = verification_json(residual.valuation(), cx.precision - Value(static_cast<std::int64_t>(n)));
}

// ---------------------------------------------------------------- subgroup sums

Window parse_window(const std::string& text, std::int64_t den) {
    auto parts = split_list(text, ',');
    if (parts.size() != 2) throw ParseError("--window takes lo,hi");
    return Window{parse_rat(parts[0], "window bound"), parse_rat(parts[1], "window bound"), den};
}

void run_subgroup(Context& cx) {
    const Ground& gr = cx.ground;
    if (gr.kind != Ground::Kind::Series || gr.field.kind != CoeffField::Kind::Finite)
        throw UsageError("subgroup runs over series(F<p>, d, N), not " + gr.text);
    RingIO<Series> io = series_io(gr.field, gr.den, gr.N);
    Window w = cx.flags.get("window") ? parse_window(*cx.flags.get("window"), gr.den) : Window{Rational(0), gr.N, gr.den};
    // Coefficients without an O-term are read far past the window; an explicit O-term still bounds them.
    Rational span = (w.hi < Rational(0) ? -w.hi : w.hi) + (w.lo < Rational(0) ? -w.lo : w.lo);
    RingIO<Series> coeff_io = series_io(gr.field, gr.den, w.hi + span * 8 + 64);
    std::vector<WindowSubspace> parts;
    json images = json::array();
    for (const auto& text : split_list(cx.flags.need("poly", "subgroup"))) {
        AdditivePoly f = AdditivePoly::from_poly(coeff_io.poly(text, 1), gr.field.p);
        parts.push_back(image_window(f, w));
        images.push_back(json{{"poly", f.to_string()}, {"dim", std::to_string(parts.back().dim())},
                              {"basis", parts.back().to_string()}});
    }
    WindowSubspace total = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) total = total + parts[i];
    auto pd = pseudo_direct_check(parts);
    json result;
    result["window"] = w.to_string();
    result["images"] = images;
    result["sum"] = json{{"dim", std::to_string(total.dim())}, {"basis", total.to_string()}};
    json pdj{{"holds", pd.holds}, {"summary", pd.to_string()}};
    if (pd.witness) {
        pdj["witness"] = pd.witness->to_string();
        pdj["witness_exponent"] = rational_to_string(pd.witness_exponent);
    }
    result["pseudo_direct"] = pdj;
    if (auto t = cx.flags.get("target")) {
        Series target = io.parse(*t);
        auto ap = optimal_approx(target, parts);
        json comps = json::array();
        for (const auto& c : ap.components) comps.push_back(c.to_string());
        result["approximation"] = json{{"best", ap.best.to_string()},
                                       {"components", comps},
                                       {"value", (ap.at_least ? ">= " : "") + ap.value.to_string()},
                                       {"best_effort", ap.best_effort}};
        cx.doc["result"] = result;
        Series again = io.parse(ap.best.to_string());
        FpVector bv = total.project(again);
        if (!total.contains(bv)) throw VerificationFailure("re-parsed approximation is not in the sum");
        Value fresh = window_value(total, total.project(target - again));
        if (fresh.is_infinite()) fresh = Value(w.hi);
        json ver{{"reparsed", true}, {"in_sum", true}, {"fresh_value", fresh.to_string()}, {"passed", fresh == ap.value}};
        if (!(fresh == ap.value)) throw VerificationFailure("re-parsed approximation has value " + fresh.to_string());
        cx.doc["verification"] = ver;
        return;
    }
    cx.doc["result"] = result;
}

// ---------------------------------------------------------------- rendering

std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
    return v.dump();
}

void render(const json& node, int indent, std::string& out) {
    std::string pad(static_cast<std::size_t>(indent), ' ');
    for (const auto& [key, v] : node.items()) {
        if (v.is_object()) {
            out += pad + key + ":\n";
            render(v, indent + 2, out);
        } else if (v.is_array()) {
            out += pad + key + ":";
            if (v.empty()) {
                out += " (none)\n";
                continue;
            }
            out += "\n";
            if (v.front().is_object()) {
                std::vector<std::string> cols;
                for (const auto& [k, x] : v.front().items()) cols.push_back(k);
                std::vector<std::size_t> widths;
                for (const auto& c : cols) {
                    std::size_t wdt = c.size();
                    for (const auto& row : v) wdt = std::max(wdt, scalar_text(row[c]).size());
                    widths.push_back(wdt);
                }
                std::string line = pad + "  ";
                for (std::size_t i = 0; i < cols.size(); ++i) line += fmt::format("{:>{}}  ", cols[i], widths[i]);
                out += trim(line).empty() ? "\n" : line.substr(0, line.find_last_not_of(' ') + 1) + "\n";
                for (const auto& row : v) {
                    line = pad + "  ";
                    for (std::size_t i = 0; i < cols.size(); ++i) {
                        if (row[cols[i]].is_object() || row[cols[i]].is_array())
                            line += fmt::format("{:>{}}  ", row[cols[i]].dump(), widths[i]);
                        else
                            line += fmt::format("{:>{}}  ", scalar_text(row[cols[i]]), widths[i]);
                    }
                    out += line.substr(0, line.find_last_not_of(' ') + 1) + "\n";
                }
            } else {
                for (const auto& x : v) out += pad + "  - " + scalar_text(x) + "\n";
            }
        } else {
            out += pad + key + ": " + scalar_text(v) + "\n";
        }
    }
}

JobReport finish(json& doc, int code, const std::string& status) {
    doc["status"] = status;
    doc["exit_code"] = code;
    JobReport rep;
    rep.exit_code = code;
    rep.structured = doc.dump(2) + "\n";
    render(doc, 0, rep.text);
    return rep;
}

}  // namespace

const std::vector<std::string>& job_commands() {
    static const std::vector<std::string> c{"lift1d", "liftnd",  "implicit",  "pinv-lift", "invert-series",
                                            "dsolve", "dhensel", "integrate", "ode",       "subgroup"};
    return c;
}

const std::vector<std::string>& job_flags() {
    static const std::vector<std::string> f{"ground", "precision", "poly", "point",  "target",
                                            "seed",   "matrix",    "window", "rate", "ode-order"};
    return f;
}

JobReport run_job(const JobSpec& spec) {
    json doc;
    doc["command"] = spec.command;
    Flags flags(spec);
    try {
        const auto& cmds = job_commands();
        if (std::find(cmds.begin(), cmds.end(), spec.command) == cmds.end())
            throw UsageError("unknown command '" + spec.command + "'");
        for (const auto& [k, v] : spec.flags) {
            const auto& known = job_flags();
            if (std::find(known.begin(), known.end(), k) == known.end()) throw UsageError("unknown flag --" + k);
        }
        Ground ground = parse_ground(flags.need("ground", spec.command));
        doc["ground"] = ground.text;
        Value precision(ground.N);
        if (auto p = flags.get("precision")) precision = Value(parse_rat(*p, "--precision"));
        if (!(precision > Value(0))) throw UsageError("--precision must be positive");
        doc["precision"] = precision.to_string();
        std::uint64_t seed = 1;
        if (auto s = flags.get("seed")) {
            std::int64_t v = parse_int(*s, "--seed");
            if (v < 0) throw ParseError("--seed must be non-negative");
            seed = static_cast<std::uint64_t>(v);
        }
        doc["seed"] = std::to_string(seed);
        Context cx{ground, flags, precision, seed, doc};

        const std::string& c = spec.command;
        if (c == "dsolve") {
            run_dsolve(cx);
        } else if (c == "dhensel") {
            run_dhensel(cx);
        } else if (c == "integrate") {
            run_integrate(cx);
        } else if (c == "ode") {
            run_ode(cx);
        } else if (c == "subgroup") {
            run_subgroup(cx);
        } else if (ground.kind == Ground::Kind::PAdic) {
            run_generic(c, padic_io(ground), cx);
        } else if (ground.kind == Ground::Kind::Series) {
            run_generic(c, series_io(ground.field, ground.den, ground.N), cx);
        } else {
            throw UsageError(c + " runs over padic(p, N) or series(field, d, N), not " + ground.text);
        }
        return finish(doc, kExitOk, "ok");
    } catch (const HypothesisError& e) {
        doc["error"] = json{{"kind", "hypothesis violated"}, {"message", e.what()}, {"counterexample", e.counterexample()}};
        return finish(doc, kExitHypothesis, "hypothesis violated");
    } catch (const StalledError& e) {
        doc["error"] = json{{"kind", "stalled"}, {"message", e.what()}};
        doc["certificate_prefix"] = json{{"steps", steps_json(e.steps())}};
        return finish(doc, kExitStalled, "stalled");
    } catch (const Error& e) {
        int code = kExitUsage;
        std::string kind = "usage";
        switch (e.kind()) {
            case ErrorKind::Parse: kind = "parse"; break;
            case ErrorKind::PrecisionLoss: code = kExitPrecisionLoss; kind = "precision loss"; break;
            case ErrorKind::ResourceCap: code = kExitResourceCap; kind = "resource cap"; break;
            default: break;
        }
        doc["error"] = json{{"kind", kind}, {"message", e.what()}};
        return finish(doc, code, kind == "usage" || kind == "parse" ? "usage error" : kind);
    } catch (const VerificationFailure& e) {
        doc["error"] = json{{"kind", "verification failed"}, {"message", e.what()}};
        return finish(doc, kExitResourceCap, "verification failed");
    } catch (const std::bad_alloc&) {
        doc["error"] = json{{"kind", "resource cap"}, {"message", "out of memory"}};
        return finish(doc, kExitResourceCap, "resource cap");
    } catch (const std::exception& e) {
        doc["error"] = json{{"kind", "internal"}, {"message", e.what()}};
        return finish(doc, kExitResourceCap, "internal error");
    }
}

}  // namespace hk
