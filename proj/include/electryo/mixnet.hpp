#pragma once

// Parallel re-encryption mix with a permutation-commitment shuffle argument
// (Terelius-Wikstrom). Every row is a tuple of ElGamal pairs; one secret
// permutation is applied to all slots of a row, and a single permutation
// commitment is shared by every slot so slots cannot be re-paired.
//
// Output row i is a re-encryption of input row psi(i).

#include <functional>
#include <numeric>

#include "electryo/rcca.hpp"
#include "electryo/zkp/fiat_shamir.hpp"

namespace electryo {

enum class SlotKind : std::uint8_t { Plain = 0, Rcca = 1 };

struct SlotSpec {
  SlotKind kind = SlotKind::Plain;
  std::uint32_t pairs = 1;  // ElGamal pairs occupied by the slot

  bool operator==(const SlotSpec&) const = default;
  void write(Writer& w) const {
    w.u8(static_cast<std::uint8_t>(kind));
    w.integer(pairs);
  }
  static SlotSpec read(Reader& r) {
    auto k = r.u8();
    if (k > 1) throw Error(Errc::Malformed, "unknown slot kind");
    SlotSpec s{static_cast<SlotKind>(k), static_cast<std::uint32_t>(r.integer())};
    if (s.pairs == 0) throw Error(Errc::Malformed, "empty slot");
    return s;
  }
};

template <class G>
SlotSpec rcca_slot() {
  return {SlotKind::Rcca, static_cast<std::uint32_t>(2 * rcca_layout<G>().elements_per_half)};
}

template <class G>
using MixRow = std::vector<Ciphertext<G>>;

template <class G>
struct MixBatch {
  std::vector<SlotSpec> slots;
  std::vector<MixRow<G>> rows;

  std::size_t width() const {
    std::size_t w = 0;
    for (const auto& s : slots) w += s.pairs;
    return w;
  }

  /// Offset of slot `k` within a flattened row.
  std::size_t offset(std::size_t k) const {
    std::size_t o = 0;
    for (std::size_t i = 0; i < k; ++i) o += slots.at(i).pairs;
    return o;
  }

  void validate() const {
    if (slots.empty()) throw Error(Errc::BatchMalformed, "batch declares no slots");
    if (rows.size() < 2) throw Error(Errc::BatchMalformed, "a mix needs at least two rows");
    const auto w = width();
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].size() != w) throw Error(Errc::BatchMalformed, "row arity mismatch", i);
  }

  bool operator==(const MixBatch&) const = default;
  auto tie() { return std::tie(slots, rows); }
  auto tie() const { return std::tie(slots, rows); }
};

template <class G>
void append_rcca(MixRow<G>& row, const RccaCiphertext<G>& c) {
  for (const auto& p : c.pairs()) row.push_back(p);
}

template <class G>
RccaCiphertext<G> read_rcca(const MixRow<G>& row, std::size_t offset, const Digest& binding) {
  const auto n = 2 * rcca_layout<G>().elements_per_half;
  if (offset + n > row.size()) throw Error(Errc::BatchMalformed, "RCCA slot out of range");
  return RccaCiphertext<G>::from_pairs(std::span(row).subspan(offset, n), binding);
}

template <class G>
struct ShuffleProof {
  std::vector<Element<G>> permutation_commitment;  // c_j
  std::vector<Element<G>> chain;                   // c^_1 .. c^_N
  Element<G> t1, t2, t3;
  std::vector<Ciphertext<G>> t4;                   // one per sub-slot
  std::vector<Element<G>> t_hat;
  Scalar<G> s1, s2, s3;
  std::vector<Scalar<G>> s4;
  std::vector<Scalar<G>> s_hat;
  std::vector<Scalar<G>> s_prime;

  bool operator==(const ShuffleProof&) const = default;
  auto tie() {
    return std::tie(permutation_commitment, chain, t1, t2, t3, t4, t_hat, s1, s2, s3, s4, s_hat,
                    s_prime);
  }
  auto tie() const {
    return std::tie(permutation_commitment, chain, t1, t2, t3, t4, t_hat, s1, s2, s3, s4, s_hat,
                    s_prime);
  }
};

/// Secret state of one mix server; never written to the transcript.
template <class G>
struct MixServerState {
  std::uint32_t server = 0;
  std::vector<std::uint32_t> permutation;         // psi
  std::vector<std::vector<Scalar<G>>> randomness;  // [output row][sub-slot]
};

template <class G>
struct ShuffleResult {
  MixBatch<G> output;
  ShuffleProof<G> proof;
  MixServerState<G> state;
};

struct ShuffleCheck {
  bool ok = true;
  std::string reason;
  explicit operator bool() const { return ok; }
};

namespace detail {

template <class G>
std::vector<Element<G>> mix_generators(ByteView election_id, std::size_t n) {
  std::vector<Element<G>> out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    Writer w;
    w.string("electryo/mix/generator");
    w.bytes(election_id);
    w.integer(i);
    out.push_back(G::hash_to_group(w.data()));
  }
  return out;  // out[0] = h, out[1..n] = h_1..h_n
}

template <class G>
std::vector<Element<G>> expand_keys(const MixBatch<G>& b, const std::vector<Element<G>>& keys) {
  if (keys.size() != b.slots.size())
    throw Error(Errc::BatchMalformed, "one public key per slot required");
  std::vector<Element<G>> out;
  for (std::size_t k = 0; k < b.slots.size(); ++k)
    for (std::uint32_t j = 0; j < b.slots[k].pairs; ++j) out.push_back(keys[k]);
  return out;
}

template <class G>
Bytes shuffle_statement(const MixBatch<G>& in, const MixBatch<G>& out,
                        const std::vector<Element<G>>& keys,
                        const std::vector<Element<G>>& perm_commitment, ByteView extra) {
  Writer w;
  w.string("shuffle");
  put(w, in);
  put(w, out);
  put(w, keys);
  put(w, perm_commitment);
  w.bytes(extra);
  return std::move(w).take();
}

template <class G>
std::vector<Element<G>> shuffle_commitments(const ShuffleProof<G>& p) {
  std::vector<Element<G>> v{p.t1, p.t2, p.t3};
  for (const auto& t : p.t4) {
    v.push_back(t.a);
    v.push_back(t.b);
  }
  v.insert(v.end(), p.t_hat.begin(), p.t_hat.end());
  v.insert(v.end(), p.chain.begin(), p.chain.end());
  return v;
}

}  // namespace detail

/// Test hook: shuffle with a caller-chosen permutation and randomness.
template <class G>
ShuffleResult<G> shuffle_with(const MixBatch<G>& in, const std::vector<Element<G>>& slot_keys,
                              std::vector<std::uint32_t> psi,
                              std::vector<std::vector<Scalar<G>>> rerand, const FsContext& ctx,
                              RandomSource& rng) {
  in.validate();
  const auto n = in.rows.size();
  const auto m = in.width();
  const auto keys = detail::expand_keys<G>(in, slot_keys);
  {
    auto sorted = psi;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.size() != n) throw Error(Errc::BatchMalformed, "not a permutation of the rows");
    for (std::size_t i = 0; i < n; ++i)
      if (sorted[i] != i)
        throw Error(Errc::BatchMalformed, "not a permutation of the rows");
    if (rerand.size() != n)
      throw Error(Errc::BatchMalformed, "randomness matrix has the wrong shape");
    for (const auto& r : rerand)
      if (r.size() != m) throw Error(Errc::BatchMalformed, "randomness matrix has the wrong shape");
  }
  const auto g = G::generator();

  ShuffleResult<G> res;
  res.output.slots = in.slots;
  res.output.rows.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < m; ++l)
      res.output.rows[i].push_back(eg_reencrypt<G>(keys[l], in.rows[psi[i]][l], rerand[i][l]));

  const auto gens = detail::mix_generators<G>(ctx.election_id, n);
  const auto& h = gens[0];
  auto& pr = res.proof;

  // Permutation commitment c_{psi(i)} = g^{r_{psi(i)}} h_i.
  std::vector<Scalar<G>> r(n);
  pr.permutation_commitment.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[psi[i]] = G::random_scalar(rng);
    pr.permutation_commitment[psi[i]] = g.pow(r[psi[i]]) * gens[i + 1];
  }

  const auto stmt = detail::shuffle_statement<G>(in, res.output, slot_keys,
                                                 pr.permutation_commitment, ctx.statement);
  const auto sctx = ctx.with_statement(stmt);
  const auto u = fs_scalar_vector<G>(sctx, "u", n);
  std::vector<Scalar<G>> up(n);
  for (std::size_t i = 0; i < n; ++i) up[i] = u[psi[i]];

  // Commitment chain c^_i = g^{r^_i} c^_{i-1}^{u'_i}.
  std::vector<Scalar<G>> rh(n);
  pr.chain.resize(n);
  auto prev = h;
  for (std::size_t i = 0; i < n; ++i) {
    rh[i] = G::random_scalar(rng);
    pr.chain[i] = g.pow(rh[i]) * prev.pow(up[i]);
    prev = pr.chain[i];
  }

  // Aggregated witnesses.
  auto r_bar = G::scalar(0), r_tilde = G::scalar(0), r_hat = G::scalar(0);
  for (std::size_t j = 0; j < n; ++j) {
    r_bar += r[j];
    r_tilde += r[j] * u[j];
  }
  {
    auto v = G::scalar(1);
    for (std::size_t i = n; i-- > 0;) {
      r_hat += rh[i] * v;
      v = v * up[i];
    }
  }
  std::vector<Scalar<G>> r_prime(m, G::scalar(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < m; ++l) r_prime[l] += rerand[i][l] * up[i];

  // Commitments.
  const auto w1 = G::random_scalar(rng), w2 = G::random_scalar(rng), w3 = G::random_scalar(rng);
  std::vector<Scalar<G>> w4(m), wh(n), wp(n);
  for (auto& x : w4) x = G::random_scalar(rng);
  for (auto& x : wh) x = G::random_scalar(rng);
  for (auto& x : wp) x = G::random_scalar(rng);

  pr.t1 = g.pow(w1);
  pr.t2 = g.pow(w2);
  pr.t3 = g.pow(w3);
  for (std::size_t i = 0; i < n; ++i) pr.t3 = pr.t3 * gens[i + 1].pow(wp[i]);
  pr.t4.resize(m);
  for (std::size_t l = 0; l < m; ++l) {
    auto a = g.pow(-w4[l]), b = keys[l].pow(-w4[l]);
    for (std::size_t i = 0; i < n; ++i) {
      a = a * res.output.rows[i][l].a.pow(wp[i]);
      b = b * res.output.rows[i][l].b.pow(wp[i]);
    }
    pr.t4[l] = {a, b};
  }
  pr.t_hat.resize(n);
  prev = h;
  for (std::size_t i = 0; i < n; ++i) {
    pr.t_hat[i] = g.pow(wh[i]) * prev.pow(wp[i]);
    prev = pr.chain[i];
  }

  const auto c = fs_challenge<G>(sctx, detail::shuffle_commitments<G>(pr));
  pr.s1 = w1 + c * r_bar;
  pr.s2 = w2 + c * r_hat;
  pr.s3 = w3 + c * r_tilde;
  for (std::size_t l = 0; l < m; ++l) pr.s4.push_back(w4[l] + c * r_prime[l]);
  for (std::size_t i = 0; i < n; ++i) {
    pr.s_hat.push_back(wh[i] + c * rh[i]);
    pr.s_prime.push_back(wp[i] + c * up[i]);
  }

  res.state.permutation = std::move(psi);
  res.state.randomness = std::move(rerand);
  return res;
}

template <class G>
ShuffleResult<G> shuffle(const MixBatch<G>& in, const std::vector<Element<G>>& slot_keys,
                         const FsContext& ctx, RandomSource& rng) {
  in.validate();
  const auto n = in.rows.size();
  std::vector<std::uint32_t> psi(n);
  std::iota(psi.begin(), psi.end(), 0u);
  for (std::size_t i = n; i > 1; --i) std::swap(psi[i - 1], psi[rng.uniform(i)]);
  std::vector<std::vector<Scalar<G>>> rerand(n);
  for (auto& row : rerand)
    for (std::size_t l = 0; l < in.width(); ++l) row.push_back(G::random_scalar(rng));
  return shuffle_with<G>(in, slot_keys, std::move(psi), std::move(rerand), ctx, rng);
}

template <class G>
ShuffleCheck verify_shuffle(const MixBatch<G>& in, const MixBatch<G>& out,
                            const ShuffleProof<G>& pr, const std::vector<Element<G>>& slot_keys,
                            const FsContext& ctx) {
  auto fail = [](std::string why) { return ShuffleCheck{false, std::move(why)}; };
  try {
    in.validate();
    out.validate();
  } catch (const Error& e) {
    return fail(e.what());
  }
  if (in.slots != out.slots) return fail("slot layout changed");
  const auto n = in.rows.size();
  const auto m = in.width();
  if (out.rows.size() != n) return fail("row count changed");
  if (slot_keys.size() != in.slots.size()) return fail("one public key per slot required");
  if (pr.permutation_commitment.size() != n || pr.chain.size() != n || pr.t_hat.size() != n ||
      pr.s_hat.size() != n || pr.s_prime.size() != n || pr.t4.size() != m || pr.s4.size() != m)
    return fail("proof has the wrong shape");

  const auto keys = detail::expand_keys<G>(in, slot_keys);
  const auto g = G::generator();
  const auto gens = detail::mix_generators<G>(ctx.election_id, n);
  const auto& h = gens[0];

  const auto stmt = detail::shuffle_statement<G>(in, out, slot_keys, pr.permutation_commitment,
                                                 ctx.statement);
  const auto sctx = ctx.with_statement(stmt);
  const auto u = fs_scalar_vector<G>(sctx, "u", n);
  const auto c = fs_challenge<G>(sctx, detail::shuffle_commitments<G>(pr));

  auto c_bar = G::identity(), h_prod = G::identity(), c_tilde = G::identity();
  auto u_prod = G::scalar(1);
  for (std::size_t j = 0; j < n; ++j) {
    c_bar = c_bar * pr.permutation_commitment[j];
    h_prod = h_prod * gens[j + 1];
    c_tilde = c_tilde * pr.permutation_commitment[j].pow(u[j]);
    u_prod = u_prod * u[j];
  }
  c_bar = c_bar / h_prod;
  const auto c_hat = pr.chain[n - 1] / h.pow(u_prod);

  if (g.pow(pr.s1) != pr.t1 * c_bar.pow(c)) return fail("permutation commitment check failed");
  if (g.pow(pr.s2) != pr.t2 * c_hat.pow(c)) return fail("commitment chain product check failed");
  {
    auto lhs = g.pow(pr.s3);
    for (std::size_t i = 0; i < n; ++i) lhs = lhs * gens[i + 1].pow(pr.s_prime[i]);
    if (lhs != pr.t3 * c_tilde.pow(c)) return fail("challenge-vector commitment check failed");
  }
  for (std::size_t l = 0; l < m; ++l) {
    auto ea = G::identity(), eb = G::identity();
    for (std::size_t j = 0; j < n; ++j) {
      ea = ea * in.rows[j][l].a.pow(u[j]);
      eb = eb * in.rows[j][l].b.pow(u[j]);
    }
    auto la = g.pow(-pr.s4[l]), lb = keys[l].pow(-pr.s4[l]);
    for (std::size_t i = 0; i < n; ++i) {
      la = la * out.rows[i][l].a.pow(pr.s_prime[i]);
      lb = lb * out.rows[i][l].b.pow(pr.s_prime[i]);
    }
    if (la != pr.t4[l].a * ea.pow(c) || lb != pr.t4[l].b * eb.pow(c))
      return fail("re-encryption check failed for sub-slot " + std::to_string(l));
  }
  auto prev = h;
  for (std::size_t i = 0; i < n; ++i) {
    if (g.pow(pr.s_hat[i]) * prev.pow(pr.s_prime[i]) != pr.t_hat[i] * pr.chain[i].pow(c))
      return fail("commitment chain link " + std::to_string(i) + " failed");
    prev = pr.chain[i];
  }
  return {};
}

// ---------------------------------------------------------------------------
// Cascade

template <class G>
struct MixStage {
  std::uint32_t server = 0;  // 1-based
  MixBatch<G> output;
  ShuffleProof<G> proof;

  bool operator==(const MixStage&) const = default;
  auto tie() { return std::tie(server, output, proof); }
  auto tie() const { return std::tie(server, output, proof); }
};

template <class G>
struct CascadeResult {
  std::vector<MixStage<G>> stages;
  std::vector<MixServerState<G>> states;  // private, one per server

  const MixBatch<G>& final_batch() const { return stages.back().output; }
};

/// Hook letting tests corrupt a stage's output before it is checked.
template <class G>
using StageTamper = std::function<void(std::uint32_t server, MixStage<G>&)>;

inline FsContext stage_context(const FsContext& base, std::uint32_t server) {
  Writer w;
  w.bytes(base.statement);
  w.integer(server);
  return base.with_statement(std::move(w).take());
}

/// Each server shuffles the previous output; the next server (and the
/// cascade driver) checks the proof before continuing. `check_stages`
/// exists only so tests can model a driver that skips those checks.
template <class G>
CascadeResult<G> run_cascade(const MixBatch<G>& batch, std::uint32_t servers,
                             const std::vector<Element<G>>& slot_keys, const FsContext& ctx,
                             RandomSource& rng, const StageTamper<G>& tamper = {},
                             bool check_stages = true) {
  if (servers == 0) throw Error(Errc::InvalidConfig, "a cascade needs at least one server");
  batch.validate();
  CascadeResult<G> out;
  const MixBatch<G>* prev = &batch;
  for (std::uint32_t k = 1; k <= servers; ++k) {
    auto sctx = stage_context(ctx, k);
    auto res = shuffle<G>(*prev, slot_keys, sctx, rng);
    MixStage<G> stage{k, std::move(res.output), std::move(res.proof)};
    res.state.server = k;
    if (tamper) tamper(k, stage);
    auto check = check_stages ? verify_shuffle<G>(*prev, stage.output, stage.proof, slot_keys, sctx)
                              : ShuffleCheck{};
    if (!check) throw Error(Errc::StageProofInvalid, "mix stage " + std::to_string(k) + ": " + check.reason, k);
    out.stages.push_back(std::move(stage));
    out.states.push_back(std::move(res.state));
    prev = &out.stages.back().output;
  }
  return out;
}

/// Returns the first failing 1-based stage index, or 0 when the chain holds.
template <class G>
std::uint32_t verify_cascade(const MixBatch<G>& input, const std::vector<MixStage<G>>& stages,
                             const std::vector<Element<G>>& slot_keys, const FsContext& ctx,
                             std::string* reason = nullptr) {
  if (stages.empty()) {
    if (reason) *reason = "no mix stages";
    return 1;
  }
  const MixBatch<G>* prev = &input;
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const auto idx = static_cast<std::uint32_t>(k + 1);
    if (stages[k].server != idx) {
      if (reason) *reason = "stage numbering broken";
      return idx;
    }
    auto check = verify_shuffle<G>(*prev, stages[k].output, stages[k].proof, slot_keys,
                                   stage_context(ctx, idx));
    if (!check) {
      if (reason) *reason = check.reason;
      return idx;
    }
    prev = &stages[k].output;
  }
  return 0;
}

}  // namespace electryo
