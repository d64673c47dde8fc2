#include "gsat/random_program.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace gsat {

namespace {

struct schema {
    std::vector<std::string> preds;
    std::vector<std::uint32_t> arity;
};

schema random_schema(pcg32& rng, const generator_limits& limits) {
    schema s;
    std::uint32_t n = rng.range(1, limits.max_predicates);
    for (std::uint32_t i = 0; i < n; ++i) {
        s.preds.push_back(std::string(1, static_cast<char>('p' + i)));
        s.arity.push_back(rng.range(1, limits.max_arity));
    }
    return s;
}

atom random_atom_over(pcg32& rng, const schema& s, std::uint32_t pred,
                      const std::vector<std::string>& pool) {
    atom a;
    a.pred = s.preds[pred];
    for (std::uint32_t k = 0; k < s.arity[pred]; ++k)
        a.args.push_back(term::var(pool[rng.below(static_cast<std::uint32_t>(pool.size()))]));
    return a;
}

// Guard first: a predicate with arity >= k carries all k body variables.
std::vector<atom> random_guarded_body(pcg32& rng, const schema& s, std::uint32_t& width_out,
                                      const generator_limits& limits) {
    std::uint32_t max_a = *std::max_element(s.arity.begin(), s.arity.end());
    std::uint32_t k = rng.range(1, std::min(limits.max_width, max_a));
    std::vector<std::uint32_t> guard_choices;
    for (std::uint32_t p = 0; p < s.preds.size(); ++p)
        if (s.arity[p] >= k) guard_choices.push_back(p);
    std::uint32_t gp = guard_choices[rng.below(static_cast<std::uint32_t>(guard_choices.size()))];

    std::vector<std::string> vars;
    for (std::uint32_t i = 1; i <= k; ++i) vars.push_back("X" + std::to_string(i));

    atom guard;
    guard.pred = s.preds[gp];
    // place each variable once, fill the rest randomly
    std::vector<std::string> slots(s.arity[gp]);
    for (std::uint32_t i = 0; i < k; ++i) {
        std::uint32_t pos;
        do {
            pos = rng.below(s.arity[gp]);
        } while (!slots[pos].empty() && s.arity[gp] > k);
        if (!slots[pos].empty()) {
            // arity == k and slot taken: find the next free one
            for (pos = 0; pos < s.arity[gp] && !slots[pos].empty(); ++pos) {
            }
        }
        slots[pos] = vars[i];
    }
    for (std::string& sl : slots)
        if (sl.empty()) sl = vars[rng.below(k)];
    for (const std::string& sl : slots) guard.args.push_back(term::var(sl));

    std::vector<atom> body{guard};
    std::uint32_t extra = rng.below(2);
    for (std::uint32_t i = 0; i < extra; ++i)
        body.push_back(random_atom_over(rng, s, rng.below(static_cast<std::uint32_t>(s.preds.size())), vars));
    width_out = k;
    return body;
}

head_conjunct random_conjunct(pcg32& rng, const schema& s, std::uint32_t body_width,
                              const generator_limits& limits) {
    // Head variable pool: a subset of body variables plus up to two fresh
    // existentials, capped at max_width variables in total.
    std::vector<std::string> pool;
    std::uint32_t kept = rng.range(1, body_width);
    for (std::uint32_t i = 1; i <= kept; ++i) pool.push_back("X" + std::to_string(i));
    std::uint32_t room = limits.max_width > kept ? limits.max_width - kept : 0;
    std::uint32_t nexist = room == 0 ? 0 : rng.below(room + 1);
    std::vector<std::string> exist;
    for (std::uint32_t i = 1; i <= nexist; ++i) {
        exist.push_back("Y" + std::to_string(i));
        pool.push_back(exist.back());
    }
    head_conjunct c;
    c.existentials = exist;
    std::uint32_t atoms = rng.range(1, 2);
    for (std::uint32_t i = 0; i < atoms; ++i)
        c.atoms.push_back(
            random_atom_over(rng, s, rng.below(static_cast<std::uint32_t>(s.preds.size())), pool));
    return c;
}

instance random_database(pcg32& rng, const schema& s, const generator_limits& limits) {
    instance db;
    std::uint32_t nconsts = rng.range(1, 3);
    std::vector<std::string> consts;
    for (std::uint32_t i = 0; i < nconsts; ++i)
        consts.push_back(std::string(1, static_cast<char>('a' + i)));
    std::uint32_t nfacts = rng.range(1, limits.max_facts);
    for (std::uint32_t i = 0; i < nfacts; ++i) {
        std::uint32_t p = rng.below(static_cast<std::uint32_t>(s.preds.size()));
        fact f;
        f.pred = s.preds[p];
        for (std::uint32_t k = 0; k < s.arity[p]; ++k)
            f.args.push_back(term::cst(consts[rng.below(nconsts)]));
        db.insert(f);
    }
    return db;
}

}  // namespace

program random_gtgd_program(std::uint64_t seed, generator_limits limits) {
    pcg32 rng(seed, 17);
    schema s = random_schema(rng, limits);
    program p;
    std::uint32_t nrules = rng.range(1, limits.max_rules);
    for (std::uint32_t i = 0; i < nrules; ++i) {
        std::uint32_t width = 0;
        std::vector<atom> body = random_guarded_body(rng, s, width, limits);
        head_conjunct c = random_conjunct(rng, s, width, limits);
        p.rules.push_back(make_rule(std::move(body), {std::move(c)}));
    }
    p.database = random_database(rng, s, limits);
    return p;
}

program random_disgtgd_program(std::uint64_t seed, generator_limits limits) {
    limits.max_rules = std::min<std::uint32_t>(limits.max_rules, 3);
    pcg32 rng(seed, 23);
    schema s = random_schema(rng, limits);
    program p;
    std::uint32_t nrules = rng.range(1, limits.max_rules);
    for (std::uint32_t i = 0; i < nrules; ++i) {
        std::uint32_t width = 0;
        std::vector<atom> body = random_guarded_body(rng, s, width, limits);
        std::uint32_t nconj = rng.range(1, limits.max_conjuncts);
        std::vector<head_conjunct> head;
        for (std::uint32_t ci = 0; ci < nconj; ++ci)
            head.push_back(random_conjunct(rng, s, width, limits));
        p.rules.push_back(make_rule(std::move(body), std::move(head)));
    }
    p.database = random_database(rng, s, limits);
    return p;
}

std::vector<query> atomic_queries(const program& p) {
    std::map<std::string, std::size_t> preds;
    for (const rule& r : p.rules) {
        for (const atom& a : r.body) preds.emplace(a.pred, a.args.size());
        for (const head_conjunct& c : r.head)
            for (const atom& a : c.atoms) preds.emplace(a.pred, a.args.size());
    }
    for (const fact& f : p.database) preds.emplace(f.pred, f.args.size());

    std::vector<std::string> consts;
    {
        std::set<std::string> cs = consts_of(p.database);
        consts.assign(cs.begin(), cs.end());
    }

    std::vector<query> out;
    for (const auto& [pred, arity] : preds) {
        if (arity > 0 && consts.empty()) continue;
        std::vector<std::size_t> odo(arity, 0);
        for (;;) {
            fact f;
            f.pred = pred;
            for (std::size_t i = 0; i < arity; ++i) f.args.push_back(term::cst(consts[odo[i]]));
            query q;
            q.disjuncts.push_back({f});
            out.push_back(std::move(q));
            std::size_t i = 0;
            for (; i < arity; ++i) {
                if (++odo[i] < consts.size()) break;
                odo[i] = 0;
            }
            if (i == arity) break;
        }
    }
    return out;
}

}  // namespace gsat
