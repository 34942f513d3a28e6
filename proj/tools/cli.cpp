#include "bezmod/cli.hpp"

#include "bezmod/decide.hpp"
#include "bezmod/error.hpp"
#include "bezmod/formula.hpp"
#include "bezmod/fv.hpp"
#include "bezmod/oracle.hpp"
#include "bezmod/qe.hpp"
#include "bezmod/ring.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace bezmod {

namespace {

using nlohmann::json;

struct CliConfig {
    std::string subcommand;
    std::string backend = "z";
    std::string formula;
    std::string sentence;
    std::string expr;
    std::string input_path;
    std::string module = "free:1";
    std::string params;
    std::string format = "text";
    unsigned long seed = 0;  // reserved for corpus tooling; output never depends on it
    std::size_t dnf_cap = 32;
    std::size_t system_cap = 64;
};

// Formula files may carry '#' comments; everything else joins into one
// line for the ordinary parsers.
std::string strip_comments(const std::string& text) {
    std::string out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        out += line;
        out += ' ';
    }
    return out;
}

std::string load_input(const CliConfig& cfg, const std::string& inline_text,
                       const char* what) {
    if (!inline_text.empty() && !cfg.input_path.empty())
        throw ParseError(std::string("give either an inline ") + what + " or --input, not both");
    if (!inline_text.empty()) return inline_text;
    if (cfg.input_path.empty())
        throw ParseError(std::string("missing ") + what + "; use --" + what + " or --input");
    std::ifstream f(cfg.input_path);
    if (!f) throw ParseError("cannot open input file: " + cfg.input_path);
    std::stringstream buf;
    buf << f.rdbuf();
    return strip_comments(buf.str());
}

ModuleSpec parse_module(const Backend& b, const std::string& text) {
    if (text == "fraction_field") return ModuleSpec::fraction_field(b);
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ParseError("module spec is free:<rank>, cyclic:<elem>, or fraction_field: " + text);
    std::string kind = text.substr(0, colon), arg = text.substr(colon + 1);
    if (kind == "free") {
        std::size_t pos = 0;
        unsigned long rank = std::stoul(arg, &pos);
        if (pos != arg.size() || rank == 0) throw ParseError("bad free-module rank: " + arg);
        return ModuleSpec::free_module(b, static_cast<unsigned>(rank));
    }
    if (kind == "cyclic") return ModuleSpec::cyclic(parse_ring_elem(b, arg));
    throw ParseError("unknown module kind: " + kind);
}

Assignment parse_params(const Backend& b, const ModuleSpec& m, const std::string& text) {
    Assignment out;
    if (text.empty()) return out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("params are name=value pairs: " + item);
        std::string name = item.substr(0, eq);
        std::string value = item.substr(eq + 1);
        ModElem elem;
        std::istringstream comps(value);
        std::string comp;
        while (std::getline(comps, comp, ';')) elem.comps.push_back(parse_ring_elem(b, comp));
        if (elem.comps.size() != m.components())
            throw ParseError("parameter " + name + " needs " + std::to_string(m.components()) +
                             " component(s), got " + std::to_string(elem.comps.size()));
        out.emplace(std::move(name), std::move(elem));
    }
    return out;
}

void skip_ws(const std::string& s, std::size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

bool eat(const std::string& s, std::size_t& pos, const std::string& word) {
    skip_ws(s, pos);
    if (s.compare(pos, word.size(), word) != 0) return false;
    pos += word.size();
    return true;
}

void expect(const std::string& s, std::size_t& pos, char c) {
    skip_ws(s, pos);
    if (pos >= s.size() || s[pos] != c)
        throw ParseError(std::string("expected '") + c + "' at position " +
                         std::to_string(pos) + " in constructible expression");
    ++pos;
}

RingElem parse_cs_scalar(const Backend& b, const std::string& s, std::size_t& pos) {
    skip_ws(s, pos);
    return parse_ring_elem(b, s, pos);
}

ConstructibleSet parse_cs_expr(const Backend& b, const std::string& s, std::size_t& pos) {
    if (eat(s, pos, "whole")) return ConstructibleSet::whole(b);
    if (eat(s, pos, "empty")) return ConstructibleSet::empty(b);
    if (eat(s, pos, "closed")) {
        expect(s, pos, '(');
        RingElem e = parse_cs_scalar(b, s, pos);
        expect(s, pos, ')');
        return ConstructibleSet::closed(e);
    }
    if (eat(s, pos, "open")) {
        expect(s, pos, '(');
        RingElem e = parse_cs_scalar(b, s, pos);
        expect(s, pos, ')');
        return ConstructibleSet::open(e);
    }
    if (eat(s, pos, "intersect")) {
        expect(s, pos, '(');
        ConstructibleSet a = parse_cs_expr(b, s, pos);
        expect(s, pos, ',');
        ConstructibleSet c = parse_cs_expr(b, s, pos);
        expect(s, pos, ')');
        return cs_intersect(a, c);
    }
    if (eat(s, pos, "union")) {
        expect(s, pos, '(');
        ConstructibleSet a = parse_cs_expr(b, s, pos);
        expect(s, pos, ',');
        ConstructibleSet c = parse_cs_expr(b, s, pos);
        expect(s, pos, ')');
        return cs_union(a, c);
    }
    if (eat(s, pos, "complement")) {
        expect(s, pos, '(');
        ConstructibleSet a = parse_cs_expr(b, s, pos);
        expect(s, pos, ')');
        return cs_complement(a);
    }
    throw ParseError("expected a constructible-set expression at position " +
                     std::to_string(pos));
}

// Either a set expression or one of the Boolean queries over sets.
std::optional<ConstructibleSet> eval_cs(const Backend& b, const std::string& text,
                                        bool* boolean, bool* bool_value) {
    std::size_t pos = 0;
    *boolean = false;
    std::optional<ConstructibleSet> result;
    if (eat(text, pos, "is_empty")) {
        expect(text, pos, '(');
        ConstructibleSet a = parse_cs_expr(b, text, pos);
        expect(text, pos, ')');
        *boolean = true;
        *bool_value = cs_is_empty(a);
    } else if (eat(text, pos, "subseteq")) {
        expect(text, pos, '(');
        ConstructibleSet a = parse_cs_expr(b, text, pos);
        expect(text, pos, ',');
        ConstructibleSet c = parse_cs_expr(b, text, pos);
        expect(text, pos, ')');
        *boolean = true;
        *bool_value = cs_subseteq(a, c);
    } else if (eat(text, pos, "contains")) {
        expect(text, pos, '(');
        ConstructibleSet a = parse_cs_expr(b, text, pos);
        expect(text, pos, ',');
        RingElem p = parse_cs_scalar(b, text, pos);
        expect(text, pos, ')');
        *boolean = true;
        *bool_value = cs_contains(a, p);
    } else {
        result = parse_cs_expr(b, text, pos);
    }
    skip_ws(text, pos);
    if (pos != text.size())
        throw ParseError("trailing input after constructible expression at position " +
                         std::to_string(pos));
    return result;
}

const char* kind_name(CsKind k) {
    switch (k) {
        case CsKind::Empty: return "empty";
        case CsKind::Whole: return "whole";
        case CsKind::Closed: return "closed";
        case CsKind::Open: return "open";
    }
    return "?";
}

json guard_json(const ConstructibleSet& s) {
    json g;
    g["kind"] = kind_name(s.kind());
    g["elem"] = (s.kind() == CsKind::Closed || s.kind() == CsKind::Open)
                    ? s.elem().to_string()
                    : "";
    return g;
}

json pair_json(const SubgroupPair& p) {
    return json{{"phi", {{"a", p.phi.a.to_string()}, {"delta", p.phi.delta.to_string()}}},
                {"psi", {{"a", p.psi.a.to_string()}, {"delta", p.psi.delta.to_string()}}}};
}

void enforce_system_cap(const PPFormula& f, std::size_t cap) {
    std::size_t unknowns = f.bound.size();
    for (const Atom& a : f.atoms)
        if (!a.is_eq()) ++unknowns;
    if (unknowns > cap)
        throw LimitError("formula needs " + std::to_string(unknowns) +
                         " unknowns; the system cap is " + std::to_string(cap));
}

int run_qe(const CliConfig& cfg, std::ostream& out) {
    Backend b = Backend::parse(cfg.backend);
    PPFormula f = parse_pp(b, load_input(cfg, cfg.formula, "formula"));
    ValuationOracle cmp(b);
    PPFormula res = eliminate(f, cmp);
    if (cfg.format == "json")
        out << json{{"formula", res.to_string()}}.dump() << "\n";
    else
        out << res.to_string() << "\n";
    return 0;
}

int run_decompose(const CliConfig& cfg, std::ostream& out) {
    Backend b = Backend::parse(cfg.backend);
    PPFormula f = parse_pp(b, load_input(cfg, cfg.formula, "formula"));
    GuardedFormula g = decompose(f);
    if (cfg.format == "json") {
        json arr = json::array();
        for (const GuardedPiece& p : g.pieces)
            arr.push_back({{"guard", guard_json(p.guard)}, {"body", p.body.to_string()}});
        out << arr.dump() << "\n";
    } else {
        for (const GuardedPiece& p : g.pieces)
            out << p.guard.to_string() << " : " << p.body.to_string() << "\n";
    }
    return 0;
}

int run_decide(const CliConfig& cfg, std::ostream& out) {
    Backend b = Backend::parse(cfg.backend);
    BSentence s = parse_sentence(b, load_input(cfg, cfg.sentence, "sentence"));
    DecideLimits limits;
    limits.literal_cap = cfg.dnf_cap;
    Decision d = decide(DecisionProblem{std::move(s), b}, limits);
    if (cfg.format == "json") {
        json cert;
        cert["summary"] = d.summary;
        cert["trace"] = d.trace;
        json ws = json::array();
        for (const WitnessReport& w : d.witnesses)
            ws.push_back({{"disjunct", w.disjunct + 1},
                          {"target", w.target + 1},
                          {"piece", guard_json(w.piece)},
                          {"at", w.at.to_string()},
                          {"module", w.module.to_string()},
                          {"target_pair", pair_json(w.target_pair)},
                          {"constraint_pairs", [&] {
                               json arr = json::array();
                               for (const SubgroupPair& p : w.constraint_pairs)
                                   arr.push_back(pair_json(p));
                               return arr;
                           }()}});
        cert["witnesses"] = std::move(ws);
        out << json{{"verdict", d.verdict == Verdict::Valid ? "valid" : "invalid"},
                    {"certificate", std::move(cert)}}
                   .dump()
            << "\n";
    } else {
        out << (d.verdict == Verdict::Valid ? "valid" : "invalid") << "\n";
        out << d.summary << "\n";
        for (const WitnessReport& w : d.witnesses)
            out << "witness: disjunct " << w.disjunct + 1 << " target " << w.target + 1
                << " piece " << w.piece.to_string() << " at " << w.at.to_string()
                << " module " << w.module.to_string() << "\n";
        for (const std::string& t : d.trace) out << "trace: " << t << "\n";
    }
    return 0;
}

int run_eval(const CliConfig& cfg, std::ostream& out) {
    Backend b = Backend::parse(cfg.backend);
    PPFormula f = parse_pp(b, load_input(cfg, cfg.formula, "formula"));
    enforce_system_cap(f, cfg.system_cap);
    ModuleSpec m = parse_module(b, cfg.module);
    Assignment params = parse_params(b, m, cfg.params);
    bool value = eval_pp(f, params, m);
    if (cfg.format == "json")
        out << json{{"value", value}}.dump() << "\n";
    else
        out << (value ? "true" : "false") << "\n";
    return 0;
}

int run_cs(const CliConfig& cfg, std::ostream& out) {
    Backend b = Backend::parse(cfg.backend);
    std::string text = load_input(cfg, cfg.expr, "expr");
    bool boolean = false, value = false;
    std::optional<ConstructibleSet> result = eval_cs(b, text, &boolean, &value);
    if (cfg.format == "json") {
        if (boolean)
            out << json{{"result", value}}.dump() << "\n";
        else
            out << guard_json(*result).dump() << "\n";
    } else {
        out << (boolean ? (value ? "true" : "false") : result->to_string()) << "\n";
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    CLI::App app{"symbolic decision engine for lattice-valued modules over Bezout domains"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub, bool wants_formula) {
        sub->add_option("-b,--backend", cfg.backend,
                        "backend selector: z | q_poly | z_loc:<prime> | q_poly_loc:<irreducible>");
        sub->add_option("--format", cfg.format, "output format: text | json")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--seed", cfg.seed, "seed for randomized corpora (reserved)");
        sub->add_option("--input", cfg.input_path, "input file ('#' starts a comment)");
        if (wants_formula) sub->add_option("--formula", cfg.formula, "inline formula");
    };

    CLI::App* qe = app.add_subcommand("qe", "eliminate quantifiers over a valuation backend");
    add_common(qe, true);
    CLI::App* dec = app.add_subcommand("decompose",
                                       "split a formula into guarded quantifier-free pieces");
    add_common(dec, true);
    CLI::App* dcd = app.add_subcommand("decide", "decide a sentence of invariant conditions");
    add_common(dcd, false);
    dcd->add_option("--sentence", cfg.sentence, "inline sentence");
    dcd->add_option("--dnf-cap", cfg.dnf_cap, "max invariant literals admitted into DNF")
        ->check(CLI::PositiveNumber);
    CLI::App* ev = app.add_subcommand("eval", "evaluate a formula in a concrete module");
    add_common(ev, true);
    ev->add_option("--module", cfg.module, "free:<rank> | cyclic:<elem> | fraction_field");
    ev->add_option("--params", cfg.params,
                   "free-variable values, e.g. y=6,z=4 (';' separates components)");
    ev->add_option("--system-cap", cfg.system_cap, "max unknowns in the linear system")
        ->check(CLI::PositiveNumber);
    CLI::App* cs = app.add_subcommand("cs", "constructible-set calculator");
    add_common(cs, false);
    cs->add_option("--expr", cfg.expr,
                   "expression over whole/empty/closed(e)/open(e) with "
                   "intersect/union/complement and is_empty/subseteq/contains");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream drain;
        int code = app.exit(e, drain, drain);
        (code == 0 ? out : err) << drain.str();
        return code == 0 ? 0 : 2;
    }

    try {
        if (qe->parsed()) return run_qe(cfg, out);
        if (dec->parsed()) return run_decompose(cfg, out);
        if (dcd->parsed()) return run_decide(cfg, out);
        if (ev->parsed()) return run_eval(cfg, out);
        if (cs->parsed()) return run_cs(cfg, out);
        err << "error: no subcommand\n";
        return 2;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const CapabilityError& e) {
        err << "capability error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace bezmod
