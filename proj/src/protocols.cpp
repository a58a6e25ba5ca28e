#include "qss/protocols.hpp"

#include "qss/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>

namespace qss {

namespace {

FieldElement fe(std::int64_t v, std::uint32_t d) { return FieldElement(v, d); }

std::string role_of(int id) {
    if (id == kDealerId) return "D";
    if (id == kSecretId) return "S";
    return std::to_string(id);
}

std::string basis_name(const FieldElement& x, const FieldElement& z) { return local_basis_name(x, z); }

// Copy of `g` with the given ids removed.
LabelledGraph without_ids(LabelledGraph g, const std::vector<int>& ids) {
    for (int id : ids) g = g.without_vertex(g.index_of(id));
    return g;
}

// Pauli on `n` sites with p's site k placed at positions[k].
PauliOperator embed(const PauliOperator& p, std::size_t n, const std::vector<std::size_t>& positions) {
    const std::uint32_t d = p.modulus();
    FieldVector x = zero_vector(n, d), z = zero_vector(n, d);
    for (std::size_t k = 0; k < p.size(); ++k) {
        x[positions.at(k)] = p.x(k);
        z[positions.at(k)] = p.z(k);
    }
    return PauliOperator(p.phase(), x, z);
}

PauliOperator z_string(const FieldVector& z) {
    const std::uint32_t d = z.front().modulus();
    return PauliOperator(FieldElement::zero(d), zero_vector(z.size(), d), z);
}

// |y> -> |k y| on one site.
std::vector<Amplitude> scale_matrix(const FieldElement& k) {
    const std::uint32_t d = k.modulus();
    std::vector<Amplitude> m(static_cast<std::size_t>(d) * d);
    for (std::uint32_t y = 0; y < d; ++y) m[static_cast<std::size_t>((k * y).value()) * d + y] = 1.0;
    return m;
}

DenseState scale_site(const DenseState& s, std::size_t site, const FieldElement& k) {
    const auto m = scale_matrix(k);
    return apply_local_matrix(s, site, m);
}

DenseState measure_local(const DenseState& s, std::size_t site, const FieldElement& x, const FieldElement& z, Rng& rng,
                         FieldElement& outcome) {
    auto meas = measure_pauli(s, PauliOperator::local(s.sites(), site, x, z), rng);
    outcome = meas.outcome;
    return std::move(meas.state);
}

DenseState superpose(const std::vector<DenseState>& terms, std::span<const Amplitude> coeff) {
    std::vector<Amplitude> amps(terms.front().dim());
    for (std::size_t t = 0; t < terms.size(); ++t) {
        if (coeff[t] == Amplitude{}) continue;
        const auto a = terms[t].amplitudes();
        for (std::size_t k = 0; k < amps.size(); ++k) amps[k] += coeff[t] * a[k];
    }
    return DenseState(terms.front().modulus(), terms.front().ids(), std::move(amps));
}

// Graph state with labels z = scale * direction on top of `g`.
LabelledGraph with_z(LabelledGraph g, const FieldVector& z) {
    for (std::size_t i = 0; i < g.size(); ++i) g.set_z(i, z[i]);
    return g;
}

FieldVector scaled(const FieldVector& v, const FieldElement& k) {
    FieldVector out = v;
    for (auto& e : out) e = e * k;
    return out;
}

struct OutputState {
    QuantumSecret decoded;
    double fidelity;
};

OutputState read_output(const DenseState& s, std::size_t site, const QuantumSecret& ref) {
    const auto rho = reduced_density(s, {site});
    const std::size_t d = rho.dim;
    double f = 0;
    Amplitude acc{};
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) acc += std::conj(ref[r]) * rho(r, c) * ref[c];
    f = acc.real();
    std::size_t k = 0;
    for (std::size_t r = 1; r < d; ++r)
        if (rho(r, r).real() > rho(k, k).real()) k = r;
    QuantumSecret out(d);
    const double root = std::sqrt(std::max(rho(k, k).real(), 1e-300));
    for (std::size_t r = 0; r < d; ++r) out[r] = rho(r, k) / root;
    return {out, f};
}

} // namespace

// ---- CC -----------------------------------------------------------------

LabelledGraph cc_encode(const Scheme& scheme, const FieldElement& s) {
    if (s.modulus() != scheme.d) throw ModulusError("cc_encode: secret modulus does not match the scheme");
    return with_z(scheme.players, scaled(scheme.encoding, s));
}

CcRecovery cc_recover(const Scheme& scheme, const LabelledGraph& encoded, const std::vector<int>& subset,
                      RecoveryMode mode, std::uint64_t seed) {
    if (subset.empty()) throw DomainError("cc_recover: empty subset");
    const auto idx = indices_of(encoded, subset);
    CcRecovery out;
    const auto w = access_weights(encoded, idx, scheme.encoding);
    if (!w) {
        out.certificate = denial_certificate(encoded, idx, scheme.encoding);
        return out;
    }
    out.weights = *w;
    out.recovered = true;
    // With w . encoding = 1 the product has eigenvalue w^{-s}.
    if (mode == RecoveryMode::Symbolic) {
        out.secret = -eigenvalue_exponent(encoded, *w);
        return out;
    }

    const PauliOperator product = stabilizer_product(encoded, *w);
    DenseState state = build_graph_state(encoded);
    Rng rng(seed);
    FieldElement total = product.phase();
    for (std::size_t site : product.support()) {
        FieldElement e = FieldElement::zero(scheme.d);
        state = measure_local(state, site, product.x(site), product.z(site), rng, e);
        out.measurements.push_back({encoded.id(site), product.x(site), product.z(site), e});
        total += e;
    }
    out.secret = -total;
    return out;
}

double cc_denial_distance(const Scheme& scheme, const std::vector<int>& subset) {
    std::vector<DensityMatrix> rhos;
    for (std::uint32_t s = 0; s < scheme.d; ++s) {
        const auto st = build_graph_state(cc_encode(scheme, fe(s, scheme.d)));
        rhos.push_back(reduced_density_ids(st, subset));
    }
    double worst = 0;
    for (std::size_t a = 0; a < rhos.size(); ++a)
        for (std::size_t b = a + 1; b < rhos.size(); ++b) worst = std::max(worst, trace_distance_checked(rhos[a], rhos[b]));
    return worst;
}

// ---- CQ -----------------------------------------------------------------

namespace {

std::vector<int> default_authorized(const Scheme& scheme, const std::vector<int>& given) {
    if (!given.empty()) {
        for (int id : given) scheme.players.index_of(id);
        if (given.size() < scheme.threshold) {
            throw DomainError("authorised set " + format_id_list(given) + " is smaller than the threshold " +
                              std::to_string(scheme.threshold));
        }
        return given;
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < scheme.threshold; ++i) out.push_back(scheme.players.id(i));
    return out;
}

struct DealerBranch {
    LabelledGraph reduced0;
    FieldVector direction;
};

DealerBranch dealer_branch(const LabelledGraph& extended, const FieldElement& t) {
    const auto basis = MeasurementBasis::xm_z(t);
    const std::uint32_t d = t.modulus();
    auto r0 = measure_symbolic(extended, 0, basis, FieldElement::zero(d)).reduced;
    auto r1 = measure_symbolic(extended, 0, basis, FieldElement::one(d)).reduced;
    FieldVector dir = zero_vector(r0.size(), d);
    for (std::size_t i = 0; i < r0.size(); ++i) dir[i] = r1.label(i).z - r0.label(i).z;
    return {std::move(r0), std::move(dir)};
}

} // namespace

PauliOperator cq_player_observable(const Scheme& scheme, const std::vector<int>& authorized, const FieldElement& t) {
    if (scheme.name == "tree") throw DomainError("tree players choose their bases independently");
    const auto branch = dealer_branch(extended_graph(scheme), t);
    auto w = prescribed_weights(scheme, authorized, t);
    if (!w) w = access_weights(branch.reduced0, indices_of(branch.reduced0, authorized), branch.direction);
    if (!w) throw DomainError("set " + format_id_list(authorized) + " cannot read the dealer's outcome");
    return stabilizer_product(branch.reduced0, *w).with_phase(FieldElement::zero(scheme.d));
}

std::optional<FieldElement> decode_dealer_dit(const LabelledGraph& reduced0, const FieldVector& direction,
                                              const PauliOperator& pooled, const FieldElement& outcome_sum) {
    const auto dec = decompose_in_stabilizers(reduced0, pooled);
    if (!dec) return std::nullopt;
    const FieldElement wc = dot(dec->weights, direction);
    if (wc.is_zero()) return std::nullopt;
    // outcome_sum = phase - w.z(0) - s (w . direction)
    return (dec->phase + eigenvalue_exponent(reduced0, dec->weights) - outcome_sum) * wc.inv();
}

std::optional<VerificationRecipe> verification_recipe(const LabelledGraph& extended, const FieldElement& t,
                                                      const PauliOperator& pooled_players) {
    const std::uint32_t d = t.modulus();
    const PauliOperator dealer = PauliOperator::local(extended.size(), 0, t, FieldElement::one(d));
    for (std::uint32_t a = 1; a < d; ++a) {
        const auto op = multiply(power(dealer, fe(a, d)), pooled_players);
        if (auto dec = decompose_in_stabilizers(extended, op)) {
            return VerificationRecipe{fe(a, d), dec->phase + eigenvalue_exponent(extended, dec->weights), dec->weights};
        }
    }
    return std::nullopt;
}

namespace {

struct CqContext {
    const Scheme* scheme;
    CqConfig config;
    std::vector<int> authorized;
    LabelledGraph extended;
    DenseState initial;
    std::vector<DealerBranch> branches;              // per t
    std::vector<PauliOperator> pooled;                // per t' (set schemes), player sites
    std::vector<std::optional<VerificationRecipe>> recipes;  // per t' (set schemes)
};

struct PlayerMeasurement {
    int id;
    FieldElement x, z;
};

CqRound simulate_round(const CqContext& ctx, std::size_t index) {
    const Scheme& scheme = *ctx.scheme;
    const std::uint32_t d = scheme.d;
    const std::size_t n = scheme.player_count();
    const bool tree = scheme.name == "tree";
    Rng rng(stream_seed(ctx.config.seed, index));

    CqRound r;
    r.index = index;
    const FieldElement t_dealer = fe(static_cast<std::int64_t>(rng.below(d)), d);
    r.t_dealer = t_dealer.value();

    std::vector<PlayerMeasurement> plan;
    FieldElement t_shared = FieldElement::zero(d);
    if (tree) {
        FieldVector t(n, FieldElement::zero(d));
        for (auto& v : t) v = fe(static_cast<std::int64_t>(rng.below(d)), d);
        FieldElement rest = FieldElement::zero(d);
        for (std::size_t i = 1; i < n; ++i) rest += t[i];
        r.kept = t[0] == t_dealer + rest;
        plan.push_back({1, FieldElement::one(d), t[0]});
        for (std::size_t i = 1; i < n; ++i) plan.push_back({scheme.players.id(i), t[i], FieldElement::one(d)});
    } else {
        t_shared = fe(static_cast<std::int64_t>(rng.below(d)), d);
        r.kept = t_shared == t_dealer;
        const PauliOperator& pooled = ctx.pooled[t_shared.value()];
        for (int id : ctx.authorized) {
            const std::size_t i = scheme.players.index_of(id);
            plan.push_back({id, pooled.x(i), pooled.z(i)});
        }
    }
    const bool sacrifice_draw = rng.uniform() < ctx.config.sacrifice;

    DenseState state = ctx.initial;
    // The dealer ships every player qudit over a public quantum channel.
    if (ctx.config.eavesdropper == Eavesdropper::InterceptResend) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t pick = rng.below(d + 1);
            const FieldElement x = pick == d ? FieldElement::zero(d) : FieldElement::one(d);
            const FieldElement z = pick == d ? FieldElement::one(d) : fe(static_cast<std::int64_t>(pick), d);
            FieldElement e = FieldElement::zero(d);
            state = measure_local(state, i + 1, x, z, rng, e);
            r.events.push_back({index, "E" + std::to_string(scheme.players.id(i)), basis_name(x, z), e.value(), false});
        }
    }

    FieldElement s = FieldElement::zero(d);
    state = measure_local(state, 0, t_dealer, FieldElement::one(d), rng, s);
    r.dealer_dit = s.value();
    r.events.push_back({index, "D", basis_name(t_dealer, FieldElement::one(d)), s.value(), false});

    FieldElement outcome_sum = FieldElement::zero(d);
    PauliOperator pooled_players(n, d);
    FieldVector px = zero_vector(n, d), pz = zero_vector(n, d);
    for (const auto& pm : plan) {
        const std::size_t i = scheme.players.index_of(pm.id);
        px[i] = pm.x;
        pz[i] = pm.z;
        FieldElement e = FieldElement::zero(d);
        if (!(pm.x.is_zero() && pm.z.is_zero())) state = measure_local(state, i + 1, pm.x, pm.z, rng, e);
        outcome_sum += e;
        r.events.push_back({index, std::to_string(pm.id), basis_name(pm.x, pm.z), e.value(), false});
    }
    pooled_players = PauliOperator(FieldElement::zero(d), px, pz);

    if (r.kept) {
        const DealerBranch& br = ctx.branches[t_dealer.value()];
        if (auto dit = decode_dealer_dit(br.reduced0, br.direction, pooled_players, outcome_sum)) {
            r.decoded = true;
            r.player_dit = dit->value();
        }
        r.sacrificed = sacrifice_draw;
        if (r.sacrificed) {
            std::optional<VerificationRecipe> recipe;
            if (tree) {
                std::vector<std::size_t> pos(n);
                std::iota(pos.begin(), pos.end(), std::size_t{1});
                recipe = verification_recipe(ctx.extended, t_dealer, embed(pooled_players, n + 1, pos));
            } else {
                recipe = ctx.recipes[t_dealer.value()];
            }
            r.violation = !recipe || recipe->dealer_power * s + outcome_sum != recipe->phase;
        }
    }
    for (auto& e : r.events) e.kept = r.kept;
    return r;
}

} // namespace

CqResult cq_run(const Scheme& scheme, const CqConfig& config) {
    if (!scheme.supports(SchemeKind::CQ)) throw DomainError("scheme " + scheme.name + " has no CQ variant");
    if (config.rounds == 0) throw DomainError("cq_run: rounds must be at least 1");
    if (config.sacrifice < 0 || config.sacrifice > 1) throw DomainError("cq_run: sacrifice fraction outside [0,1]");
    const std::uint32_t d = scheme.d;
    const std::size_t n = scheme.player_count();

    CqContext ctx{&scheme, config, {}, extended_graph(scheme), DenseState::basis(d, {0}, {0}), {}, {}, {}};
    if (scheme.name == "tree") {
        std::vector<int> all(scheme.players.ids());
        if (!config.authorized.empty() && config.authorized.size() != n)
            throw DomainError("the tree scheme needs every player");
        ctx.authorized = all;
    } else {
        ctx.authorized = default_authorized(scheme, config.authorized);
    }
    ctx.initial = build_graph_state(ctx.extended);
    std::vector<std::size_t> pos(n);
    std::iota(pos.begin(), pos.end(), std::size_t{1});
    for (std::uint32_t t = 0; t < d; ++t) {
        ctx.branches.push_back(dealer_branch(ctx.extended, fe(t, d)));
        if (scheme.name != "tree") {
            ctx.pooled.push_back(cq_player_observable(scheme, ctx.authorized, fe(t, d)));
            ctx.recipes.push_back(verification_recipe(ctx.extended, fe(t, d), embed(ctx.pooled.back(), n + 1, pos)));
        }
    }

    CqResult res;
    res.rounds.resize(config.rounds);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t i = 0; i < config.rounds; ++i) {
        try {
            res.rounds[i] = simulate_round(ctx, i);
        } catch (...) {
#pragma omp critical(qss_cq_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    res.transcript = ProtocolTranscript(scheme.name, "cq", d, config.seed);
    for (const auto& r : res.rounds) {
        res.transcript.append_events(r.events);
        if (!r.kept) continue;
        ++res.kept;
        if (!r.decoded || r.player_dit != r.dealer_dit) ++res.mismatches;
        if (r.sacrificed) {
            ++res.sacrificed;
            if (r.violation) ++res.violations;
        }
    }
    res.key_length = res.kept - res.sacrificed;
    res.kept_fraction = static_cast<double>(res.kept) / static_cast<double>(config.rounds);
    res.violation_rate = res.sacrificed ? static_cast<double>(res.violations) / static_cast<double>(res.sacrificed) : 0.0;

    const double p = 1.0 / d;
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(config.rounds));
    res.transcript.add_audit("sift_fraction", std::abs(res.kept_fraction - p) <= 5 * se, format_real(res.kept_fraction));
    res.transcript.add_audit("key_agreement", res.mismatches == 0,
                             std::to_string(res.kept - res.mismatches) + "/" + std::to_string(res.kept));
    res.transcript.add_audit("stabilizer_check", res.violations == 0,
                             std::to_string(res.violations) + "/" + std::to_string(res.sacrificed) + " rate " +
                                 format_real(res.violation_rate));
    return res;
}

StabilizerIdentity cq_stabilizer_identity(const Scheme& scheme, const FieldElement& t) {
    const std::uint32_t d = scheme.d;
    const std::size_t n = scheme.player_count();
    const FieldElement one = FieldElement::one(d);
    const LabelledGraph ext = extended_graph(scheme);
    FieldVector w = zero_vector(n + 1, d);
    std::vector<int> set;
    std::int64_t dealer_power = 1;
    FieldElement phase = t;
    if (scheme.name == "twothree") {
        w[0] = t * 2;
        w[1] = -(t * 2);
        w[2] = one;
        set = {1, 2};
        dealer_power = 2;
        phase = t * 3;
    } else if (scheme.name == "ring35") {
        w[0] = t;
        w[1] = -t;
        w[2] = one + t * 2;
        w[3] = -t;
        set = {1, 2, 3};
    } else {
        throw DomainError("no stabilizer identity is stated for scheme " + scheme.name);
    }
    const auto branch = dealer_branch(ext, t);
    const auto k = stabilizer_product(branch.reduced0, *prescribed_weights(scheme, set, t));
    std::vector<std::size_t> pos(n);
    std::iota(pos.begin(), pos.end(), std::size_t{1});
    const auto dealer = power(PauliOperator::local(n + 1, 0, t, one), dealer_power);
    return {stabilizer_product(ext, w), multiply(dealer, embed(k, n + 1, pos)), phase};
}

namespace {

struct AuditFamily {
    LabelledGraph graph;                // dealer at index 0
    std::vector<FieldVector> directions;  // one per eavesdropper qudit
};

AuditFamily audit_family(const Scheme& scheme) {
    const std::uint32_t d = scheme.d;
    const LabelledGraph ext = extended_graph(scheme);
    if (scheme.name == "twothree") {
        return {without_ids(ext, {3}), {make_vector({1, 1, 0}, d)}};
    }
    if (scheme.name == "ring35") {
        return {without_ids(ext, {4, 5}), {make_vector({1, 1, 0, 0}, d), make_vector({1, 0, 0, 1}, d)}};
    }
    throw DomainError("no adversarial family is defined for scheme " + scheme.name);
}

} // namespace

std::size_t cq_audit_family_size(const Scheme& scheme) {
    const auto fam = audit_family(scheme);
    std::size_t size = 1;
    for (std::size_t k = 0; k < fam.directions.size(); ++k) size *= scheme.d;
    return size;
}

SecurityAudit cq_audit_security(const Scheme& scheme, std::span<const Amplitude> alpha) {
    const std::uint32_t d = scheme.d;
    const auto fam = audit_family(scheme);
    const std::size_t e_sites = fam.directions.size();
    const std::size_t size = cq_audit_family_size(scheme);
    if (alpha.size() != size) throw DomainError("cq_audit_security: expected " + std::to_string(size) + " amplitudes");
    double nrm = 0;
    for (auto a : alpha) nrm += std::norm(a);
    if (std::abs(nrm - 1.0) > 1e-9) throw DomainError("cq_audit_security: amplitudes must have unit norm");

    std::vector<int> e_ids;
    for (std::size_t k = 0; k < e_sites; ++k) e_ids.push_back(kEveId - static_cast<int>(k));
    std::vector<DenseState> terms;
    for (std::size_t idx = 0; idx < size; ++idx) {
        std::vector<std::uint32_t> digits(e_sites);
        FieldVector z = zero_vector(fam.graph.size(), d);
        std::size_t rem = idx;
        for (std::size_t k = 0; k < e_sites; ++k) {
            digits[k] = static_cast<std::uint32_t>(rem % d);
            rem /= d;
            for (std::size_t v = 0; v < z.size(); ++v) z[v] += fam.directions[k][v] * static_cast<std::int64_t>(digits[k]);
        }
        terms.push_back(tensor(DenseState::basis(d, e_ids, digits), build_graph_state(with_z(fam.graph, z))));
    }
    const DenseState state = superpose(terms, alpha);

    std::vector<std::size_t> e_pos(e_sites);
    std::iota(e_pos.begin(), e_pos.end(), std::size_t{0});
    std::vector<std::size_t> ed_pos = e_pos;
    ed_pos.push_back(state.site_of(kDealerId));
    const auto rho_ed = reduced_density(state, ed_pos);
    const auto rho_e = reduced_density(state, e_pos);
    const auto rho_d = reduced_density(state, {state.site_of(kDealerId)});
    const auto mixed = maximally_mixed(d, {kDealerId});
    return {trace_distance(rho_ed, tensor(rho_e, mixed)), trace_distance(rho_d, mixed)};
}

// ---- QQ -----------------------------------------------------------------

QuantumSecret random_secret(std::uint32_t d, Rng& rng) {
    QuantumSecret v(d);
    for (auto& a : v) {
        const double re = rng.normal();
        a = Amplitude(re, rng.normal());
    }
    return make_secret(d, std::move(v));
}

QuantumSecret make_secret(std::uint32_t d, std::vector<Amplitude> amplitudes) {
    if (amplitudes.size() != d) throw DomainError("quantum secret needs exactly d amplitudes");
    double nrm = 0;
    for (auto a : amplitudes) nrm += std::norm(a);
    if (nrm < 1e-24) throw DomainError("quantum secret has zero norm");
    const double inv = 1.0 / std::sqrt(nrm);
    for (auto& a : amplitudes) a *= inv;
    return amplitudes;
}

DenseState encoded_quantum_secret(const Scheme& scheme, const QuantumSecret& secret) {
    const std::uint32_t d = scheme.d;
    if (secret.size() != d) throw DomainError("quantum secret dimension does not match the scheme");
    std::vector<DenseState> terms;
    for (std::uint32_t j = 0; j < d; ++j) terms.push_back(build_graph_state(with_z(scheme.players, scaled(scheme.encoding, fe(j, d)))));
    return superpose(terms, secret);
}

PauliOperator qq_correction(const Scheme& scheme, const FieldElement& m, const FieldElement& n) {
    std::size_t a = scheme.player_count();
    for (std::size_t i = 0; i < scheme.player_count(); ++i) {
        if (!scheme.encoding[i].is_zero()) {
            a = i;
            break;
        }
    }
    if (a == scheme.player_count()) throw DomainError("qq_correction: the dealer has no neighbour");
    const PauliOperator k = power(stabilizer_of(scheme.players, a), -(n * scheme.encoding[a].inv()));
    return multiply(k, z_string(scaled(scheme.encoding, -m)));
}

namespace {

DenseState dealt_state(const Scheme& scheme, const QuantumSecret& secret) {
    if (!scheme.supports(SchemeKind::QQ)) throw DomainError("scheme " + scheme.name + " has no QQ variant");
    if (secret.size() != scheme.d) throw DomainError("quantum secret dimension does not match the scheme");
    return tensor(DenseState::single(scheme.d, kSecretId, secret), build_graph_state(extended_graph(scheme)));
}

QqDeal finish_deal(const Scheme& scheme, BellOutcome bell) {
    const auto u = qq_correction(scheme, bell.m, bell.n);
    return {bell.m, bell.n, bell.probability, apply_pauli(bell.remainder, u)};
}

} // namespace

QqDeal qq_deal(const Scheme& scheme, const QuantumSecret& secret, std::uint64_t seed) {
    const auto full = dealt_state(scheme, secret);
    return finish_deal(scheme, bell_measure(full, 0, 1, seed));
}

QqDeal qq_deal_outcome(const Scheme& scheme, const QuantumSecret& secret, const FieldElement& m, const FieldElement& n) {
    const auto full = dealt_state(scheme, secret);
    return finish_deal(scheme, bell_project(full, 0, 1, m, n));
}

bool qq_authorized(const Scheme& scheme, const std::vector<int>& subset) {
    for (int id : subset) scheme.players.index_of(id);
    std::vector<int> s = subset;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw DomainError("subset lists a player twice");
    return s.size() >= scheme.threshold;
}

namespace {

// Register decoder for the (2,3) code. Written out, the encoded state is
//   sum_{j,M} a_j |M - j>_1 U|M + j>_2 U|M>_3,
// i.e. register v holds alpha_v M + beta_v j, in the computational basis or
// behind U. Two controlled additions inside the pair leave one register with
// c j and the other locked to the third player's register.
struct RegisterModel {
    FieldElement alpha, beta;
    bool fourier;
};

RegisterModel twothree_register(int id, std::uint32_t d) {
    switch (id) {
    case 1: return {fe(1, d), fe(-1, d), false};
    case 2: return {fe(1, d), fe(1, d), true};
    case 3: return {fe(1, d), fe(0, d), true};
    }
    throw DomainError("twothree has players 1..3");
}

// target register += factor * control register.
DenseState register_add(DenseState s, std::size_t target, bool target_fourier, std::size_t control,
                        bool control_fourier, const FieldElement& factor) {
    if (target_fourier) s = apply_local(s, LocalGate::Uinv, target);
    if (control_fourier) s = apply_local(s, LocalGate::Uinv, control);
    s = apply_controlled_shift(s, control, target, factor);
    if (target_fourier) s = apply_local(s, LocalGate::U, target);
    if (control_fourier) s = apply_local(s, LocalGate::U, control);
    return s;
}

struct PairPlan {
    int p, q;
    FieldElement a, b, c;  // q += a p; p += b q; p ends as c j
};

std::optional<PairPlan> plan_pair(int p, int q, int r, std::uint32_t d) {
    const auto P = twothree_register(p, d), Q = twothree_register(q, d), R = twothree_register(r, d);
    const FieldElement det = P.alpha * R.beta - P.beta * R.alpha;
    if (det.is_zero()) return std::nullopt;
    const FieldElement a = (Q.beta * R.alpha - Q.alpha * R.beta) * det.inv();
    const FieldElement qa = Q.alpha + a * P.alpha, qb = Q.beta + a * P.beta;
    if (qa.is_zero()) return std::nullopt;
    const FieldElement b = -(P.alpha * qa.inv());
    const FieldElement c = P.beta + b * qb;
    if (c.is_zero()) return std::nullopt;
    return PairPlan{p, q, a, b, c};
}

QqRecovery decode_twothree_pair(const DenseState& encoded, int first, int second, const QuantumSecret& ref) {
    const std::uint32_t d = encoded.modulus();
    const int third = 6 - first - second;
    auto plan = plan_pair(first, second, third, d);
    if (!plan) plan = plan_pair(second, first, third, d);
    if (!plan) throw DomainError("no register decoder for this pair");
    const auto P = twothree_register(plan->p, d), Q = twothree_register(plan->q, d);
    const std::size_t sp = encoded.site_of(plan->p), sq = encoded.site_of(plan->q);

    DenseState s = register_add(encoded, sq, Q.fourier, sp, P.fourier, plan->a);
    s = register_add(s, sp, P.fourier, sq, Q.fourier, plan->b);
    if (P.fourier) s = apply_local(s, LocalGate::Uinv, sp);
    s = scale_site(s, sp, plan->c.inv());

    const auto out = read_output(s, sp, ref);
    QqRecovery rec;
    rec.output = plan->p;
    rec.decoded = out.decoded;
    rec.fidelity = out.fidelity;
    std::ostringstream m;
    m << "registers: " << plan->q << " += " << plan->a.centered() << "*" << plan->p << ", " << plan->p
      << " += " << plan->b.centered() << "*" << plan->q;
    rec.method = m.str();
    return rec;
}

// Coset decoder for a set T. Conditioned on computational values y of the
// other players C, T holds  sum_j a_j w^{j sigma(y)} |h_{z = j c_T + delta(y)}>
// with h the graph induced on T, delta(y) = A_{TC} y and sigma(y) = c_C . y.
struct CosetPlan {
    std::vector<int> members;
    std::vector<int> others;
    std::size_t ref = 0;  // position in members of the output site
    std::vector<std::vector<std::uint32_t>> rows;
    // syndrome key -> (delta, sigma)
    std::vector<std::pair<std::vector<std::uint32_t>, FieldVector>> table_keys;
    std::vector<FieldElement> table_sigma;
};

std::vector<std::uint32_t> syndrome_of(const CosetPlan& plan, const FieldVector& delta) {
    std::vector<std::uint32_t> out;
    const std::uint32_t d = delta.front().modulus();
    for (const auto& row : plan.rows) {
        std::uint64_t v = 0;
        for (std::size_t k = 0; k < row.size(); ++k) v += static_cast<std::uint64_t>(row[k]) * delta[k].value();
        out.push_back(static_cast<std::uint32_t>(v % d));
    }
    return out;
}

std::optional<CosetPlan> plan_coset(const Scheme& scheme, const std::vector<int>& members) {
    const std::uint32_t d = scheme.d;
    const LabelledGraph& g = scheme.players;
    CosetPlan plan;
    plan.members = members;
    for (int id : g.ids())
        if (std::find(members.begin(), members.end(), id) == members.end()) plan.others.push_back(id);
    auto enc = [&](int id) { return scheme.encoding[g.index_of(id)]; };

    bool found = false;
    for (std::size_t k = 0; k < members.size(); ++k) {
        if (!enc(members[k]).is_zero()) {
            plan.ref = k;
            found = true;
            break;
        }
    }
    if (!found) return std::nullopt;
    const FieldElement co_inv = enc(members[plan.ref]).inv();
    for (std::size_t k = 0; k < members.size(); ++k) {
        if (k == plan.ref) continue;
        std::vector<std::uint32_t> row(members.size(), 0);
        row[k] = 1;
        row[plan.ref] = (-(enc(members[k]) * co_inv)).value();
        plan.rows.push_back(row);
    }

    std::size_t count = 1;
    for (std::size_t k = 0; k < plan.others.size(); ++k) count *= d;
    for (std::size_t idx = 0; idx < count; ++idx) {
        FieldVector delta = zero_vector(members.size(), d);
        FieldElement sigma = FieldElement::zero(d);
        std::size_t rem = idx;
        for (int u : plan.others) {
            const FieldElement y = fe(static_cast<std::int64_t>(rem % d), d);
            rem /= d;
            sigma += enc(u) * y;
            for (std::size_t k = 0; k < members.size(); ++k) delta[k] += g.weight(g.index_of(u), g.index_of(members[k])) * y;
        }
        auto key = syndrome_of(plan, delta);
        for (const auto& [k2, dl] : plan.table_keys) {
            if (k2 == key) return std::nullopt;  // two complements look alike
        }
        plan.table_keys.emplace_back(std::move(key), std::move(delta));
        plan.table_sigma.push_back(sigma);
    }
    return plan;
}

QqRecovery decode_coset(const Scheme& scheme, const DenseState& encoded, const CosetPlan& plan,
                        const QuantumSecret& ref, Rng& rng) {
    const std::uint32_t d = scheme.d;
    const LabelledGraph& g = scheme.players;
    const std::size_t t = plan.members.size();
    std::vector<std::size_t> sites(t);
    for (std::size_t k = 0; k < t; ++k) sites[k] = encoded.site_of(plan.members[k]);
    struct Edge {
        std::size_t a, b;
        FieldElement w;
    };
    std::vector<Edge> edges;
    for (std::size_t a = 0; a < t; ++a)
        for (std::size_t b = a + 1; b < t; ++b) {
            const auto& w = g.weight(g.index_of(plan.members[a]), g.index_of(plan.members[b]));
            if (!w.is_zero()) edges.push_back({a, b, w});
        }
    auto enc = [&](std::size_t k) { return scheme.encoding[g.index_of(plan.members[k])]; };

    QqRecovery rec;
    DenseState s = encoded;
    // labelled-graph basis of h -> computational basis
    for (const auto& e : edges) s = apply_controlled_z(s, sites[e.a], sites[e.b], -e.w);
    for (auto site : sites) s = apply_local(s, LocalGate::Uinv, site);
    auto syn = measure_syndrome(s, sites, plan.rows, rng);
    s = std::move(syn.state);
    for (std::size_t k = 0; k < syn.syndrome.size(); ++k)
        rec.events.push_back({0, std::to_string(plan.members[0]), "syndrome" + std::to_string(k), syn.syndrome[k], true});
    std::size_t hit = plan.table_keys.size();
    for (std::size_t k = 0; k < plan.table_keys.size(); ++k)
        if (plan.table_keys[k].first == syn.syndrome) hit = k;
    if (hit == plan.table_keys.size()) throw DomainError("coset decoder saw an impossible syndrome");
    const FieldVector& delta = plan.table_keys[hit].second;
    const FieldElement sigma = plan.table_sigma[hit];

    // back to the labelled-graph basis, then drop the label offset and the
    // phase w^{j sigma} with a power of the reference stabilizer of h
    for (auto site : sites) s = apply_local(s, LocalGate::U, site);
    for (const auto& e : edges) s = apply_controlled_z(s, sites[e.a], sites[e.b], e.w);
    FieldVector x = zero_vector(s.sites(), d), z = zero_vector(s.sites(), d);
    for (std::size_t k = 0; k < t; ++k) z[sites[k]] = -delta[k];
    s = apply_pauli(s, PauliOperator(FieldElement::zero(d), x, z));
    {
        FieldVector kx = zero_vector(s.sites(), d), kz = zero_vector(s.sites(), d);
        kx[sites[plan.ref]] = FieldElement::one(d);
        for (const auto& e : edges) {
            if (e.a == plan.ref) kz[sites[e.b]] = e.w;
            if (e.b == plan.ref) kz[sites[e.a]] = e.w;
        }
        const PauliOperator k_ref(FieldElement::zero(d), kx, kz);
        s = apply_pauli(s, power(k_ref, sigma * enc(plan.ref).inv()));
    }
    for (const auto& e : edges) s = apply_controlled_z(s, sites[e.a], sites[e.b], -e.w);

    // now sum_j a_j (x)_v U|j c_v>; Z outcomes k_v leave w^{j sum c_v k_v}
    FieldElement acc = FieldElement::zero(d);
    for (std::size_t k = 0; k < t; ++k) {
        if (k == plan.ref || enc(k).is_zero()) continue;
        FieldElement e = FieldElement::zero(d);
        s = measure_local(s, sites[k], FieldElement::zero(d), FieldElement::one(d), rng, e);
        rec.events.push_back({0, std::to_string(plan.members[k]), "Z", e.value(), true});
        acc += enc(k) * e;
    }
    const std::size_t out = sites[plan.ref];
    const FieldElement co_inv = enc(plan.ref).inv();
    s = apply_pauli(s, PauliOperator::local(s.sites(), out, acc * co_inv, FieldElement::zero(d)));
    s = apply_local(s, LocalGate::Uinv, out);
    s = scale_site(s, out, co_inv);

    const auto o = read_output(s, out, ref);
    rec.output = plan.members[plan.ref];
    rec.decoded = o.decoded;
    rec.fidelity = o.fidelity;
    rec.method = "coset on " + format_id_list(plan.members);
    return rec;
}

// Subsets of `ids` with at least `k` members, smallest first.
std::vector<std::vector<int>> subsets_at_least(const std::vector<int>& ids, std::size_t k) {
    std::vector<std::vector<int>> out;
    const std::size_t n = ids.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<int> sub;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) sub.push_back(ids[i]);
        if (sub.size() >= k) out.push_back(std::move(sub));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return out;
}

} // namespace

QqRecovery qq_recover(const Scheme& scheme, const DenseState& encoded, const std::vector<int>& subset,
                      const QuantumSecret& reference, std::uint64_t seed) {
    if (!qq_authorized(scheme, subset)) {
        throw DomainError("subset " + format_id_list(subset) + " is not authorised for " + scheme.name);
    }
    std::vector<int> sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    if (scheme.name == "twothree") return decode_twothree_pair(encoded, sorted[0], sorted[1], reference);

    Rng rng(seed);
    for (const auto& cand : subsets_at_least(sorted, scheme.threshold)) {
        if (auto plan = plan_coset(scheme, cand)) return decode_coset(scheme, encoded, *plan, reference, rng);
    }
    throw DomainError("no decoder found for subset " + format_id_list(subset));
}

IsolationLaw isolation_law(int target, const FieldElement& centre_outcome, const FieldVector& z_outcomes) {
    const std::uint32_t d = centre_outcome.modulus();
    FieldElement b = FieldElement::zero(d);
    for (const auto& v : z_outcomes) b += v;
    if (target == 1) return {true, -b, false};
    return {false, centre_outcome + b, true};
}

QqRecovery qq_isolate(const Scheme& scheme, const DenseState& encoded, int target, const QuantumSecret& reference,
                      std::uint64_t seed) {
    if (scheme.name != "tree") throw DomainError("isolation to one player is defined for the tree scheme");
    const std::uint32_t d = scheme.d;
    scheme.players.index_of(target);
    Rng rng(seed);
    QqRecovery rec;
    DenseState s = encoded;
    FieldElement centre = FieldElement::zero(d);
    if (target != 1) {
        s = measure_local(s, s.site_of(1), FieldElement::one(d), FieldElement::zero(d), rng, centre);
        rec.events.push_back({0, "1", "X", centre.value(), true});
    }
    FieldVector zs;
    for (int id : scheme.players.ids()) {
        if (id == 1 || id == target) continue;
        FieldElement e = FieldElement::zero(d);
        s = measure_local(s, s.site_of(id), FieldElement::zero(d), FieldElement::one(d), rng, e);
        rec.events.push_back({0, std::to_string(id), "Z", e.value(), true});
        zs.push_back(e);
    }
    const auto law = isolation_law(target, centre, zs);
    const std::size_t out = s.site_of(target);
    if (law.inverse_fourier) s = apply_local(s, LocalGate::Uinv, out);
    s = apply_pauli(s, PauliOperator::local(s.sites(), out, law.shift, FieldElement::zero(d)));
    if (law.negate) s = scale_site(s, out, -FieldElement::one(d));

    const auto o = read_output(s, out, reference);
    rec.output = target;
    rec.decoded = o.decoded;
    rec.fidelity = o.fidelity;
    rec.method = "isolate to " + std::to_string(target);
    return rec;
}

std::vector<QuantumSecret> probe_secrets(std::uint32_t d) {
    std::vector<QuantumSecret> out;
    for (std::uint32_t a = 0; a < d; ++a) {
        QuantumSecret v(d);
        v[a] = 1.0;
        out.push_back(v);
    }
    const double h = 1.0 / std::sqrt(2.0);
    for (std::uint32_t a = 0; a < d; ++a)
        for (std::uint32_t b = a + 1; b < d; ++b) {
            QuantumSecret v(d);
            v[a] = h;
            v[b] = h;
            out.push_back(v);
        }
    return out;
}

double qq_audit_denial(const Scheme& scheme, const std::vector<int>& subset) {
    if (qq_authorized(scheme, subset)) {
        throw DomainError("subset " + format_id_list(subset) + " is authorised; nothing to deny");
    }
    std::vector<DensityMatrix> rhos;
    for (const auto& probe : probe_secrets(scheme.d))
        rhos.push_back(reduced_density_ids(encoded_quantum_secret(scheme, probe), subset));
    double worst = 0;
    for (std::size_t a = 0; a < rhos.size(); ++a)
        for (std::size_t b = a + 1; b < rhos.size(); ++b) worst = std::max(worst, trace_distance_checked(rhos[a], rhos[b]));
    return worst;
}

// ---- runs ----------------------------------------------------------------

RunResult run_cc(const Scheme& scheme, const FieldElement& secret, const std::vector<int>& subset, RecoveryMode mode,
                 std::uint64_t seed) {
    RunResult out;
    out.transcript = ProtocolTranscript(scheme.name, "cc", scheme.d, seed);
    const auto encoded = cc_encode(scheme, secret);
    const auto rec = cc_recover(scheme, encoded, subset, mode, seed);
    for (const auto& m : rec.measurements)
        out.transcript.add_event({0, role_of(m.party), basis_name(m.x, m.z), m.outcome.value(), true});
    if (rec.recovered) {
        const bool match = rec.secret && *rec.secret == secret;
        std::string w = "(";
        for (std::size_t i = 0; i < rec.weights.size(); ++i) w += (i ? "," : "") + std::to_string(rec.weights[i].value());
        out.transcript.add_audit("access_witness", true, w + ")");
        out.transcript.add_audit("recovery", match, std::to_string(rec.secret->value()));
        out.summary = "recovered " + std::to_string(rec.secret->value());
        out.ok = match;
    } else {
        const double td = cc_denial_distance(scheme, subset);
        const std::string cert = rec.certificate ? to_string(*rec.certificate) : "not found";
        out.transcript.add_audit("denial_certificate", rec.certificate.has_value(), "\"" + cert + "\"");
        out.transcript.add_audit("denial_trace_distance", td < kStateTolerance, format_real(td, 12));
        out.summary = "denied, certificate " + cert;
        out.ok = rec.certificate.has_value() && td < kStateTolerance;
    }
    return out;
}

RunResult run_cq(const Scheme& scheme, const CqConfig& config) {
    auto res = cq_run(scheme, config);
    RunResult out;
    std::ostringstream s;
    s << "kept " << res.kept << " of " << config.rounds << " (fraction " << format_real(res.kept_fraction, 4)
      << "), key length " << res.key_length << ", mismatches " << res.mismatches << ", violations " << res.violations
      << " of " << res.sacrificed;
    out.summary = s.str();
    // Under attack the check is supposed to fire; otherwise everything must agree.
    out.ok = config.eavesdropper == Eavesdropper::InterceptResend || (res.mismatches == 0 && res.violations == 0);
    out.transcript = std::move(res.transcript);
    return out;
}

RunResult run_qq(const Scheme& scheme, const std::optional<QuantumSecret>& secret, const std::vector<int>& subset,
                 std::uint64_t seed) {
    RunResult out;
    out.transcript = ProtocolTranscript(scheme.name, "qq", scheme.d, seed);
    QuantumSecret sec;
    if (secret) {
        sec = make_secret(scheme.d, *secret);
    } else {
        Rng rng(seed);
        sec = random_secret(scheme.d, rng);
    }
    const auto deal = qq_deal(scheme, sec, stream_seed(seed, 1));
    out.transcript.add_event({0, "D", "bell_m", deal.m.value(), true});
    out.transcript.add_event({0, "D", "bell_n", deal.n.value(), true});
    const double f_deal = fidelity(deal.corrected, encoded_quantum_secret(scheme, sec));
    out.transcript.add_audit("deal_fidelity", f_deal >= 1 - kStateTolerance, format_real(f_deal, 12));
    out.ok = f_deal >= 1 - kStateTolerance;

    if (qq_authorized(scheme, subset)) {
        auto rec = qq_recover(scheme, deal.corrected, subset, sec, stream_seed(seed, 2));
        out.transcript.append_events(rec.events);
        const bool good = rec.fidelity >= 1 - kStateTolerance;
        out.transcript.add_audit("decode_fidelity", good, format_real(rec.fidelity, 12));
        out.summary = "fidelity " + format_real(rec.fidelity) + " at player " + std::to_string(rec.output);
        out.ok = out.ok && good;
    } else {
        const double td = qq_audit_denial(scheme, subset);
        out.transcript.add_audit("denial_trace_distance", td < kStateTolerance, format_real(td, 12));
        out.summary = "denied, max trace distance " + format_real(td, 3);
    }
    return out;
}

} // namespace qss
