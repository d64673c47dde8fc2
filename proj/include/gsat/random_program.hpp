#pragma once

// Deterministic random program generation for the verification suites. A
// small PCG32 stream keeps runs reproducible across platforms; guardedness
// is enforced by drawing the guard atom first and taking the remaining body
// atoms over its variables.

#include <cstdint>
#include <string>
#include <vector>

#include "gsat/model.hpp"

namespace gsat {

struct pcg32 {
    std::uint64_t state = 0x853c49e6748fea9bULL;
    std::uint64_t inc = 0xda3e39cb94b95bdbULL;

    explicit pcg32(std::uint64_t seed, std::uint64_t stream = 54u) {
        state = 0;
        inc = (stream << 1u) | 1u;
        next();
        state += seed;
        next();
    }

    std::uint32_t next() {
        std::uint64_t old = state;
        state = old * 6364136223846793005ULL + inc;
        std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((~rot + 1u) & 31u));
    }

    // Uniform in [0, n) by rejection.
    std::uint32_t below(std::uint32_t n) {
        if (n <= 1) return 0;
        std::uint32_t threshold = (~n + 1u) % n;
        for (;;) {
            std::uint32_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    std::uint32_t range(std::uint32_t lo, std::uint32_t hi) {  // inclusive bounds
        return lo + below(hi - lo + 1);
    }
};

struct generator_limits {
    std::uint32_t max_predicates = 3;
    std::uint32_t max_arity = 3;
    std::uint32_t max_rules = 4;
    std::uint32_t max_width = 3;
    std::uint32_t max_facts = 4;
    std::uint32_t max_conjuncts = 2;  // disjunctive programs only
};

// One guarded TGD program with a small database; deterministic in the seed.
program random_gtgd_program(std::uint64_t seed, generator_limits limits = {});

// One guarded DisTGD program (<= 3 rules by default).
program random_disgtgd_program(std::uint64_t seed, generator_limits limits = {});

// All ground atomic queries over the program's predicates and the database
// constants, in canonical order.
std::vector<query> atomic_queries(const program& p);

}  // namespace gsat
