#include "kinkforge/system/system.hpp"

#include "kinkforge/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace kinkforge::system {

using nlohmann::json;

namespace {

const MultiPoly& U() {
    static const MultiPoly v = MultiPoly::variable(kU);
    return v;
}
const MultiPoly& Th() {
    static const MultiPoly v = MultiPoly::variable(kTheta);
    return v;
}

struct Alias {
    const char* name;
    Exponents5 e;
};
constexpr Alias kAliases[] = {
    {"bz", {1, 1, 1, 1, 1}},
    {"kinetics-a", {1, 2, 2, 2, 1}},
    {"kinetics-b", {2, 1, 1, 2, 1}},
    {"kinetics-c", {1, 2, 1, 2, 1}},
};

}  // namespace

MultiPoly PdeSystem::rhs_bound(int i) const {
    const MultiPoly& r = rhs.at(static_cast<std::size_t>(i));
    return B ? r.substitute(algebra::Assignment{{kB, *B}}) : r;
}

PdeSystem make_system(const Exponents5& e, std::optional<Rational> B, std::string name) {
    if (e.l == 0 || e.m == 0 || e.n == 0 || e.k == 0 || e.q == 0)
        throw InvalidParameter("family exponents must all be at least 1");
    if (B && B->is_zero()) throw InvalidParameter("B must be nonzero");
    PdeSystem s;
    s.name = name.empty() ? "family(" + std::to_string(e.l) + "," + std::to_string(e.m) + "," + std::to_string(e.n) +
                                "," + std::to_string(e.k) + "," + std::to_string(e.q) + ")"
                          : std::move(name);
    s.rhs[0] = U().pow(e.l) * (MultiPoly(1) - U().pow(e.m) - Th().pow(e.n));
    s.rhs[1] = -(MultiPoly::variable(kB) * U().pow(e.k) * Th().pow(e.q));
    s.B = B;
    s.exponents = e;
    return s;
}

PdeSystem kpp_system() {
    PdeSystem s;
    s.name = "kpp";
    s.scalar = true;
    s.rhs[0] = U() - U() * U();
    return s;
}

PdeSystem builtin_system(const std::string& alias, std::optional<Rational> B) {
    if (alias == "kpp") return kpp_system();
    for (const auto& a : kAliases)
        if (alias == a.name) return make_system(a.e, B, a.name);
    throw InvalidParameter("unknown builtin system '" + alias + "'");
}

std::vector<std::string> builtin_aliases() {
    std::vector<std::string> out;
    for (const auto& a : kAliases) out.emplace_back(a.name);
    out.emplace_back("kpp");
    return out;
}

PdeSystem with_B(const PdeSystem& sys, std::optional<Rational> B) {
    if (B && B->is_zero()) throw InvalidParameter("B must be nonzero");
    PdeSystem s = sys;
    if (!s.scalar) s.B = B;
    return s;
}

std::optional<Rational> parse_B(const std::string& text) {
    if (text == "sym") return std::nullopt;
    const Rational b = Rational::parse(text);
    if (b.is_zero()) throw InvalidParameter("B must be nonzero");
    return b;
}

namespace {

std::optional<Rational> B_field(const json& j) {
    if (!j.contains("B")) return std::nullopt;
    const auto& b = j.at("B");
    if (b.is_string()) return parse_B(b.get<std::string>());
    if (b.is_number_integer()) {
        const Rational r(b.get<long>());
        if (r.is_zero()) throw InvalidParameter("B must be nonzero");
        return r;
    }
    throw ParseError("field 'B' must be \"sym\" or a rational string");
}

unsigned exponent_field(const json& fam, const char* key) {
    if (!fam.contains(key)) throw ParseError(std::string("field 'family.") + key + "' is missing");
    const auto& v = fam.at(key);
    if (!v.is_number_integer() || v.get<long>() < 0)
        throw ParseError(std::string("field 'family.") + key + "' must be a natural number");
    return v.get<unsigned>();
}

}  // namespace

PdeSystem parse_system_spec(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("system spec: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("system spec must be an object");
    for (const auto& [key, _] : j.items())
        if (key != "family" && key != "B" && key != "name" && key != "builtin")
            throw ParseError("system spec: unknown field '" + key + "'");
    const std::optional<Rational> B = B_field(j);
    std::string name = j.value("name", std::string{});
    if (j.contains("builtin")) {
        if (j.contains("family")) throw ParseError("system spec: give either 'builtin' or 'family'");
        PdeSystem s = builtin_system(j.at("builtin").get<std::string>(), B);
        if (!name.empty()) s.name = name;
        return s;
    }
    if (!j.contains("family")) throw ParseError("system spec: field 'family' is missing");
    const auto& fam = j.at("family");
    if (!fam.is_object()) throw ParseError("field 'family' must be an object");
    const Exponents5 e{exponent_field(fam, "l"), exponent_field(fam, "m"), exponent_field(fam, "n"),
                       exponent_field(fam, "k"), exponent_field(fam, "q")};
    return make_system(e, B, name);
}

std::string emit_system_spec(const PdeSystem& sys) {
    json j;
    if (sys.scalar) {
        j["builtin"] = "kpp";
    } else {
        if (!sys.exponents) throw InvalidParameter("system has no family exponents to emit");
        const auto& e = *sys.exponents;
        j["family"] = {{"l", e.l}, {"m", e.m}, {"n", e.n}, {"k", e.k}, {"q", e.q}};
        j["B"] = sys.B ? sys.B->to_string() : "sym";
    }
    j["name"] = sys.name;
    return j.dump();
}

PdeSystem resolve_system(const std::string& alias_or_path, const std::optional<std::string>& B) {
    const std::optional<Rational> b = B ? parse_B(*B) : std::nullopt;
    for (const auto& a : builtin_aliases())
        if (a == alias_or_path) return builtin_system(a, b);
    std::ifstream in(alias_or_path);
    if (!in) throw InvalidParameter("'" + alias_or_path + "' is neither a builtin system nor a readable file");
    std::stringstream ss;
    ss << in.rdbuf();
    PdeSystem s = parse_system_spec(ss.str());
    return B ? with_B(s, b) : s;
}

RatFunc PhaseConstants::p() const {
    if (a.is_zero()) throw InvalidParameter("phase constant a is zero");
    return b / a;
}

TravelingOde reduce_to_traveling_ode(const PdeSystem& sys, const PhaseConstants& phase) {
    if (phase.a.is_zero()) throw InvalidParameter("traveling-wave reduction needs a != 0");
    const int n = sys.components();
    std::map<std::string, RatFunc> chi;
    chi[kU] = RatFunc::variable(TravelingOde::value(0));
    chi[kTheta] = n == 2 ? RatFunc::variable(TravelingOde::value(1)) : RatFunc();
    TravelingOde ode;
    for (int i = 0; i < n; ++i) {
        const RatFunc rhs = RatFunc(sys.rhs_bound(i)).substitute(chi);
        ode.equations.push_back(phase.b * RatFunc::variable(TravelingOde::d1(i)) -
                                phase.a * phase.a * RatFunc::variable(TravelingOde::d2(i)) - rhs);
    }
    return ode;
}

}  // namespace kinkforge::system
