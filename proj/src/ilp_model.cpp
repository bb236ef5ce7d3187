#include "ttsched/ilp_model.hpp"

#include "text_util.hpp"
#include "ttsched/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <unordered_map>

namespace ttsched {

namespace {

// Sum duplicate variables and drop zero coefficients, keeping first-seen order.
std::vector<LpTerm> merged(const std::vector<LpTerm>& terms) {
    std::vector<LpTerm> out;
    for (const auto& t : terms) {
        auto it = std::find_if(out.begin(), out.end(), [&](const LpTerm& o) { return o.var == t.var; });
        if (it == out.end()) {
            out.push_back(t);
        } else {
            it->coef += t.coef;
        }
    }
    std::erase_if(out, [](const LpTerm& t) { return t.coef == 0; });
    return out;
}

std::string join_name(std::string_view head, std::initializer_list<std::int64_t> parts) {
    std::string s(head);
    for (const auto p : parts) {
        s += '_';
        s += std::to_string(p);
    }
    return s;
}

} // namespace

std::size_t IlpModel::family_count(int family) const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [family](const LpRow& r) { return r.family == family; }));
}

IlpModel build_model(const Tseg& tseg, std::span<const FlowRequest> flows) {
    const auto& topo = tseg.topology();
    const auto& cfg = tseg.config();
    const int n = cfg.hyper_period();
    const std::size_t nodes = topo.node_count();
    const std::size_t links = topo.link_count();
    const std::size_t f_count = flows.size();
    for (const auto& f : flows) {
        validate(f, cfg, topo);
    }

    IlpModel model;
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    auto copy_at = [n](std::size_t l, Slot q) {
        return l * static_cast<std::size_t>(n) + static_cast<std::size_t>(q - 1);
    };
    // tx[k][copy] and wait[k][node * N + q - 1] hold variable indices.
    std::vector<std::vector<std::size_t>> tx(f_count, std::vector<std::size_t>(links * n, kNone));
    std::vector<std::vector<std::size_t>> wait(f_count, std::vector<std::size_t>(nodes * n, kNone));
    std::vector<std::size_t> z(f_count);

    for (std::size_t k = 0; k < f_count; ++k) {
        for (std::size_t l = 0; l < links; ++l) {
            const auto& link = topo.link(static_cast<LinkId>(l));
            for (Slot q = 1; q <= n; ++q) {
                if (!tseg.is_free(Copy{static_cast<LinkId>(l), q})) {
                    continue;
                }
                tx[k][copy_at(l, q)] = model.vars.size();
                model.vars.push_back(LpVar{
                    join_name("x", {static_cast<std::int64_t>(index(link.src)),
                                    static_cast<std::int64_t>(index(link.dst)), q,
                                    static_cast<std::int64_t>(k + 1)}),
                    VarType::Binary, 1});
            }
        }
    }
    for (std::size_t k = 0; k < f_count; ++k) {
        z[k] = model.vars.size();
        model.vars.push_back(LpVar{join_name("Z", {static_cast<std::int64_t>(k + 1)}), VarType::Binary, 1});
        model.objective.push_back(z[k]);
    }
    for (std::size_t k = 0; k < f_count; ++k) {
        const auto& f = flows[k];
        const std::int64_t in_flight = (f.max_delay_slots + f.period_slots - 1) / f.period_slots;
        for (std::size_t v = 0; v < nodes; ++v) {
            for (Slot q = 1; q <= n; ++q) {
                wait[k][v * n + static_cast<std::size_t>(q - 1)] = model.vars.size();
                model.vars.push_back(LpVar{join_name("x", {static_cast<std::int64_t>(v),
                                                           static_cast<std::int64_t>(v), q,
                                                           static_cast<std::int64_t>(k + 1)}),
                                           VarType::Integer, in_flight});
            }
        }
    }

    auto add_row = [&](std::string name, int family, std::vector<LpTerm> terms, Sense sense,
                       std::int64_t rhs) {
        model.rows.push_back(LpRow{std::move(name), family, merged(terms), sense, rhs});
    };
    auto waiting = [&](std::size_t k, std::size_t v, Slot q) {
        return wait[k][v * n + static_cast<std::size_t>(cfg.wrap(q) - 1)];
    };
    auto incident = [&](std::size_t k, std::size_t v, Slot q, bool incoming, std::int64_t coef,
                        std::vector<LpTerm>& terms) {
        for (std::size_t l = 0; l < links; ++l) {
            const auto& link = topo.link(static_cast<LinkId>(l));
            const auto end = incoming ? link.dst : link.src;
            if (index(end) != v) {
                continue;
            }
            if (const auto var = tx[k][copy_at(l, q)]; var != kNone) {
                terms.push_back(LpTerm{coef, var});
            }
        }
    };
    auto relay = [&](std::size_t k, std::size_t v) {
        return v != index(topo.at(flows[k].src)) && v != index(topo.at(flows[k].dst));
    };

    // Arrivals at a relay must wait one slot.
    for (std::size_t k = 0; k < f_count; ++k) {
        for (std::size_t v = 0; v < nodes; ++v) {
            if (!relay(k, v)) {
                continue;
            }
            for (Slot q = 1; q <= n; ++q) {
                std::vector<LpTerm> t;
                incident(k, v, q, true, 1, t);
                t.push_back(LpTerm{-1, waiting(k, v, q)});
                add_row(join_name("eq1", {static_cast<std::int64_t>(v), q, static_cast<std::int64_t>(k + 1)}),
                        1, std::move(t), Sense::LessEq, 0);
            }
        }
    }
    // Departures from a relay must have waited; frames are conserved.
    for (std::size_t k = 0; k < f_count; ++k) {
        for (std::size_t v = 0; v < nodes; ++v) {
            if (!relay(k, v)) {
                continue;
            }
            for (Slot q = 1; q <= n; ++q) {
                const auto idx = {static_cast<std::int64_t>(v), static_cast<std::int64_t>(q),
                                  static_cast<std::int64_t>(k + 1)};
                std::vector<LpTerm> out;
                incident(k, v, q, false, 1, out);
                out.push_back(LpTerm{-1, waiting(k, v, q - 1)});
                add_row(join_name("eq2_out", idx), 2, std::move(out), Sense::LessEq, 0);

                std::vector<LpTerm> bal{LpTerm{1, waiting(k, v, q - 1)}};
                incident(k, v, q, true, 1, bal);
                bal.push_back(LpTerm{-1, waiting(k, v, q)});
                incident(k, v, q, false, -1, bal);
                add_row(join_name("eq2_bal", idx), 2, std::move(bal), Sense::Equal, 0);
            }
        }
    }
    auto source_out = [&](std::size_t k, std::int64_t coef) {
        std::vector<LpTerm> t;
        const auto s = index(topo.at(flows[k].src));
        for (Slot q = 1; q <= n; ++q) {
            incident(k, s, q, false, coef, t);
        }
        return t;
    };
    // One frame per period leaves the source.
    for (std::size_t k = 0; k < f_count; ++k) {
        add_row(join_name("eq3", {static_cast<std::int64_t>(k + 1)}), 3, source_out(k, 1),
                Sense::LessEq, n / flows[k].period_slots);
    }
    // Copy capacity.
    if (f_count > 0) {
        for (std::size_t l = 0; l < links; ++l) {
            const auto& link = topo.link(static_cast<LinkId>(l));
            for (Slot q = 1; q <= n; ++q) {
                if (tx[0][copy_at(l, q)] == kNone) {
                    continue;
                }
                std::vector<LpTerm> t;
                for (std::size_t k = 0; k < f_count; ++k) {
                    t.push_back(LpTerm{1, tx[k][copy_at(l, q)]});
                }
                add_row(join_name("eq4", {static_cast<std::int64_t>(index(link.src)),
                                          static_cast<std::int64_t>(index(link.dst)), q}),
                        4, std::move(t), Sense::LessEq, 1);
            }
        }
    }
    // Identical path in every period.
    for (std::size_t k = 0; k < f_count; ++k) {
        const int p = flows[k].period_slots;
        if (p >= n) {
            continue;
        }
        for (std::size_t l = 0; l < links; ++l) {
            const auto& link = topo.link(static_cast<LinkId>(l));
            for (Slot q = 1; q <= n; ++q) {
                const auto var = tx[k][copy_at(l, q)];
                if (var == kNone) {
                    continue;
                }
                std::vector<LpTerm> t{LpTerm{1, var}};
                if (const auto next = tx[k][copy_at(l, cfg.wrap(q + p))]; next != kNone) {
                    t.push_back(LpTerm{-1, next});
                }
                add_row(join_name("eq5", {static_cast<std::int64_t>(index(link.src)),
                                          static_cast<std::int64_t>(index(link.dst)), q,
                                          static_cast<std::int64_t>(k + 1)}),
                        5, std::move(t), Sense::Equal, 0);
            }
        }
    }
    // Delay budget over one hyper-period.
    for (std::size_t k = 0; k < f_count; ++k) {
        std::vector<LpTerm> t;
        for (std::size_t v = 0; v < nodes; ++v) {
            for (Slot q = 1; q <= n; ++q) {
                t.push_back(LpTerm{1, waiting(k, v, q)});
            }
        }
        const auto& f = flows[k];
        add_row(join_name("eq6", {static_cast<std::int64_t>(k + 1)}), 6, std::move(t), Sense::LessEq,
                static_cast<std::int64_t>(n / f.period_slots) * (f.max_delay_slots - 1));
    }
    // Z_k = 1 only if every frame of the hyper-period leaves the source.
    for (std::size_t k = 0; k < f_count; ++k) {
        auto t = source_out(k, -flows[k].period_slots);
        t.insert(t.begin(), LpTerm{n, z[k]});
        add_row(join_name("eq7", {static_cast<std::int64_t>(k + 1)}), 7, std::move(t), Sense::LessEq, 0);
    }
    return model;
}

ModelSize closed_form_size(std::size_t nodes, std::size_t free_copies, int hyper_period,
                           std::span<const FlowRequest> flows) {
    ModelSize s;
    const std::size_t f = flows.size();
    const auto n = static_cast<std::size_t>(hyper_period);
    const std::size_t relays = nodes >= 2 ? nodes - 2 : 0;
    s.vars = f * (free_copies + nodes * n) + f;
    s.per_family[1] = f * relays * n;
    s.per_family[2] = 2 * f * relays * n;
    s.per_family[3] = f;
    s.per_family[4] = f > 0 ? free_copies : 0;
    for (const auto& fl : flows) {
        if (fl.period_slots < hyper_period) {
            s.per_family[5] += free_copies;
        }
    }
    s.per_family[6] = f;
    s.per_family[7] = f;
    for (int i = 1; i <= 7; ++i) {
        s.rows += s.per_family[i];
    }
    return s;
}

namespace {

constexpr std::size_t kTermsPerLine = 8;

void write_expr(std::ostream& out, const IlpModel& m, const std::vector<LpTerm>& terms) {
    if (terms.empty()) {
        out << (m.vars.empty() ? "0" : "0 " + m.vars.front().name);
        return;
    }
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        if (i > 0 && i % kTermsPerLine == 0) {
            out << "\n   ";
        }
        const auto mag = t.coef < 0 ? -t.coef : t.coef;
        if (i == 0) {
            out << (t.coef < 0 ? "- " : "");
        } else {
            out << (t.coef < 0 ? " - " : " + ");
        }
        if (mag != 1) {
            out << mag << ' ';
        }
        out << m.vars[t.var].name;
    }
}

void write_names(std::ostream& out, const IlpModel& m, VarType type) {
    std::size_t on_line = 0;
    for (const auto& v : m.vars) {
        if (v.type != type) {
            continue;
        }
        out << (on_line == 0 ? " " : " ") << v.name;
        if (++on_line == kTermsPerLine) {
            out << '\n';
            on_line = 0;
        }
    }
    if (on_line != 0) {
        out << '\n';
    }
}

} // namespace

std::string export_lp(const IlpModel& model) {
    std::ostringstream out;
    out << "Maximize\n obj: ";
    std::vector<LpTerm> obj;
    for (const auto v : model.objective) {
        obj.push_back(LpTerm{1, v});
    }
    if (obj.empty()) {
        out << "0";
    } else {
        write_expr(out, model, obj);
    }
    out << "\nSubject To\n";
    for (const auto& r : model.rows) {
        out << ' ' << r.name << ": ";
        write_expr(out, model, r.terms);
        out << (r.sense == Sense::LessEq ? " <= " : r.sense == Sense::Equal ? " = " : " >= ") << r.rhs
            << '\n';
    }
    out << "Bounds\n";
    for (const auto& v : model.vars) {
        if (v.type == VarType::Integer) {
            out << " 0 <= " << v.name << " <= " << v.upper << '\n';
        }
    }
    out << "Binary\n";
    write_names(out, model, VarType::Binary);
    out << "General\n";
    write_names(out, model, VarType::Integer);
    out << "End\n";
    return out.str();
}

namespace {

enum class Section { None, Objective, Constraints, Bounds, Binary, General, End };

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::optional<Section> section_of(std::string_view line) {
    const auto l = lower(text::trim(line));
    if (l == "maximize" || l == "maximise" || l == "max") {
        return Section::Objective;
    }
    if (l == "subject to" || l == "st" || l == "s.t." || l == "such that") {
        return Section::Constraints;
    }
    if (l == "bounds" || l == "bound") {
        return Section::Bounds;
    }
    if (l == "binary" || l == "binaries" || l == "bin") {
        return Section::Binary;
    }
    if (l == "general" || l == "generals" || l == "gen") {
        return Section::General;
    }
    if (l == "end") {
        return Section::End;
    }
    return std::nullopt;
}

bool is_number(std::string_view tok) {
    return !tok.empty() && (std::isdigit(static_cast<unsigned char>(tok[0])) ||
                            ((tok[0] == '-' || tok[0] == '+') && tok.size() > 1 &&
                             std::isdigit(static_cast<unsigned char>(tok[1]))));
}

struct RawExpr {
    std::vector<std::pair<std::int64_t, std::string>> terms;
    std::optional<Sense> sense;
    std::int64_t rhs = 0;
};

RawExpr parse_expr(std::string_view body, bool with_sense) {
    RawExpr e;
    std::int64_t sign = 1;
    std::int64_t coef = 1;
    bool rhs_next = false;
    bool have_rhs = false;
    for (const auto tok : text::words(body)) {
        if (rhs_next) {
            if (tok == "-") {
                sign = -sign;
                continue;
            }
            if (tok == "+") {
                continue;
            }
            e.rhs = sign * text::to_int<std::int64_t>(tok, "right-hand side");
            have_rhs = true;
            rhs_next = false;
            continue;
        }
        if (tok == "+" || tok == "-") {
            sign = tok == "-" ? -1 : 1;
        } else if (tok == "<=" || tok == "=<" || tok == ">=" || tok == "=>" || tok == "=") {
            if (!with_sense || e.sense) {
                throw ParseError("unexpected relation '" + std::string(tok) + "'");
            }
            e.sense = tok == "=" ? Sense::Equal : (tok[0] == '<' || tok[1] == '<') ? Sense::LessEq : Sense::GreaterEq;
            sign = 1;
            rhs_next = true;
        } else if (is_number(tok)) {
            coef = text::to_int<std::int64_t>(tok, "coefficient");
        } else {
            e.terms.emplace_back(sign * coef, std::string(tok));
            sign = 1;
            coef = 1;
        }
    }
    if (with_sense && (!e.sense || !have_rhs)) {
        throw ParseError("constraint without relation or right-hand side: '" + std::string(body) + "'");
    }
    return e;
}

} // namespace

IlpModel parse_lp(std::string_view lp) {
    Section section = Section::None;
    std::string objective;
    std::vector<std::string> rows; // "name: body"
    std::vector<std::string> binary;
    std::vector<std::string> general;
    std::unordered_map<std::string, std::int64_t> upper;

    for (auto line : text::lines(lp)) {
        if (const auto c = line.find('\\'); c != std::string_view::npos) {
            line = line.substr(0, c);
        }
        if (text::trim(line).empty()) {
            continue;
        }
        if (const auto s = section_of(line)) {
            section = *s;
            continue;
        }
        const auto body = text::trim(line);
        switch (section) {
        case Section::None:
        case Section::End:
            throw ParseError("text outside of any LP section: '" + std::string(body) + "'");
        case Section::Objective:
            objective += ' ';
            objective += body;
            break;
        case Section::Constraints: {
            const auto first = text::words(body).front();
            if (first.back() == ':' || body.find(':') != std::string_view::npos) {
                rows.emplace_back(body);
            } else if (rows.empty()) {
                throw ParseError("continuation line before the first constraint");
            } else {
                rows.back() += ' ';
                rows.back() += body;
            }
            break;
        }
        case Section::Bounds: {
            const auto w = text::words(body);
            if (w.size() != 5 || w[1] != "<=" || w[3] != "<=") {
                throw ParseError("unsupported bound line: '" + std::string(body) + "'");
            }
            if (text::to_int<std::int64_t>(w[0], "lower bound") != 0) {
                throw ParseError("only zero lower bounds are supported");
            }
            upper[std::string(w[2])] = text::to_int<std::int64_t>(w[4], "upper bound");
            break;
        }
        case Section::Binary:
            for (const auto w : text::words(body)) {
                binary.emplace_back(w);
            }
            break;
        case Section::General:
            for (const auto w : text::words(body)) {
                general.emplace_back(w);
            }
            break;
        }
    }
    if (section != Section::End) {
        throw ParseError("LP text lacks an End section");
    }

    IlpModel model;
    std::unordered_map<std::string, std::size_t> by_name;
    auto declare = [&](const std::string& name, VarType type) {
        if (!by_name.emplace(name, model.vars.size()).second) {
            throw ParseError("variable declared twice: " + name);
        }
        std::int64_t ub = 1;
        if (type == VarType::Integer) {
            const auto it = upper.find(name);
            if (it == upper.end()) {
                throw ParseError("integer variable without bound: " + name);
            }
            ub = it->second;
        }
        model.vars.push_back(LpVar{name, type, ub});
    };
    for (const auto& b : binary) {
        declare(b, VarType::Binary);
    }
    for (const auto& g : general) {
        declare(g, VarType::Integer);
    }
    auto resolve = [&](const RawExpr& e) {
        std::vector<LpTerm> terms;
        for (const auto& [c, name] : e.terms) {
            const auto it = by_name.find(name);
            if (it == by_name.end()) {
                throw ParseError("undeclared variable: " + name);
            }
            terms.push_back(LpTerm{c, it->second});
        }
        return merged(terms);
    };

    auto obj_body = std::string_view(objective);
    if (const auto colon = obj_body.find(':'); colon != std::string_view::npos) {
        obj_body = obj_body.substr(colon + 1);
    }
    for (const auto& t : resolve(parse_expr(obj_body, false))) {
        if (t.coef != 1) {
            throw ParseError("objective coefficients must be 1");
        }
        model.objective.push_back(t.var);
    }
    for (const auto& r : rows) {
        const auto colon = r.find(':');
        LpRow row;
        row.name = std::string(text::trim(std::string_view(r).substr(0, colon)));
        if (row.name.size() > 2 && row.name.rfind("eq", 0) == 0 &&
            std::isdigit(static_cast<unsigned char>(row.name[2]))) {
            row.family = row.name[2] - '0';
        }
        const auto e = parse_expr(std::string_view(r).substr(colon + 1), true);
        row.terms = resolve(e);
        row.sense = *e.sense;
        row.rhs = e.rhs;
        model.rows.push_back(std::move(row));
    }
    return model;
}

} // namespace ttsched
