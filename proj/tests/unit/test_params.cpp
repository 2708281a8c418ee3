#include <doctest.h>

#include "nvcool/errors.hpp"
#include "nvcool/params.hpp"

using namespace nvcool;

TEST_SUITE("params") {

TEST_CASE("presets") {
    auto names = preset_names();
    REQUIRE(names.size() == 2);
    SystemParams hf = preset("high-frequency");
    SystemParams lf = preset("low-frequency");
    CHECK(hf.resonator.omega_m == doctest::Approx(two_pi * 9.22e9));
    CHECK(hf.rates.k13 == hf.rates.k31);
    CHECK(hf.rates.k21 == hf.rates.k12);
    CHECK(lf.resonator.omega_m == doctest::Approx(two_pi * 2.872e9));
    CHECK(lf.resonator.n_spins == 1.6e15);
    CHECK(lf.rates.k_sp == hf.rates.k_sp);
    hf.validate();
    lf.validate();
    CHECK_THROWS_AS(preset("medium"), DomainError);
}

TEST_CASE("validation rejects unphysical values") {
    SystemParams p;
    p.resonator.kappa = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = SystemParams{};
    p.resonator.n_spins = 0.5;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = SystemParams{};
    p.rates.k47 = -1.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = SystemParams{};
    p.heating.raman_exponent = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("registry reads and writes every field") {
    SystemParams p;
    for (const auto& e : param_registry()) {
        double v = get_param(p, e.key);
        set_param(p, e.key, v * 1.5 + 1.0);
        CHECK(get_param(p, e.key) == v * 1.5 + 1.0);
    }
    CHECK(find_param("resonator.kappa") != nullptr);
    CHECK(find_param("resonator.kapa") == nullptr);
    CHECK_THROWS_AS(get_param(p, "nope"), DomainError);
    CHECK_THROWS_AS(set_param(p, "nope", 1.0), DomainError);
}

TEST_CASE("parameter hash tracks values") {
    SystemParams a, b;
    CHECK(params_hash(a) == params_hash(b));
    b.resonator.n_spins = 4e14;
    CHECK(params_hash(a) != params_hash(b));
    CHECK(params_canonical_text(a).find("resonator.kappa = ") != std::string::npos);
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
}

TEST_CASE("provenance notes") {
    CHECK(provenance_note("high-frequency", "resonator.omega_m") == "2pi*9.22e9");
    CHECK(provenance_note("low-frequency", "resonator.kappa").find("2900") != std::string::npos);
}

}
