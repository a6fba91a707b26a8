#pragma once

#include "doctest.h"
#include "hrvkit/error.hpp"

// Runs `expr` and checks it throws hrvkit::Error with `code`.
#define CHECK_CODE(expr, expected_code)                                  \
    do {                                                        \
        bool thrown_ = false;                                   \
        try {                                                   \
            (void)(expr);                                       \
        } catch (const hrvkit::Error& e_) {                     \
            thrown_ = true;                                     \
            CHECK_MESSAGE(e_.code() == (expected_code), e_.what());      \
        }                                                       \
        CHECK_MESSAGE(thrown_, "expected an hrvkit::Error");    \
    } while (0)

#include "hrvkit/simulate.hpp"

inline hrvkit::data::SampleMatrix simulated(hrvkit::simulate::Example example, std::size_t n,
                                            std::uint64_t seed) {
    hrvkit::simulate::GeneratorSpec spec;
    spec.example = example;
    spec.n = n;
    spec.seed = seed;
    return hrvkit::simulate::example_dataset(spec);
}
