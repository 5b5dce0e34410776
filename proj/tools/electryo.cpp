// electryo: command-line front end for running and checking an election.
//
// The transcript is the public bulletin board. Private material (teller
// shares, voter keys, the paper ballot box) lives in a state file next to
// it, by default <transcript>.state.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>

#include "electryo/electryo.hpp"

using namespace electryo;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Files

template <class G>
struct VoterKeyFile {
  Bytes election_id;
  std::uint32_t index = 0;
  std::string id;
  ElGamalKeyPair<G> selene;

  auto tie() { return std::tie(election_id, index, id, selene); }
  auto tie() const { return std::tie(election_id, index, id, selene); }
};

ElectionConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidConfig, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidConfig, "config " + path.string() + ": " + e.what());
  }
  ElectionConfig c;
  try {
    c.label = j.value("label", c.label);
    c.candidates = j.at("candidates").get<std::vector<std::string>>();
    c.voters = j.at("voters").get<std::uint32_t>();
    c.tellers = j.value("tellers", c.tellers);
    c.threshold = j.value("threshold", c.threshold);
    c.mix_servers = j.value("mix_servers", c.mix_servers);
    c.seed = j.value("seed", c.seed);
    c.sign_date_printer = j.value("sign_date_printer", c.sign_date_printer);
    c.date = j.value("date", c.date);
    c.printer = j.value("printer", c.printer);
    const auto backend = j.value("backend", std::string("test"));
    if (backend == "test") c.backend = Backend::TestGroup;
    else if (backend == "p256") c.backend = Backend::ProdGroup;
    else throw Error(Errc::InvalidConfig, "backend must be \"test\" or \"p256\"");
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidConfig, "config " + path.string() + ": " + e.what());
  }
  c.validate();
  return c;
}

Backend transcript_backend(const std::vector<BbEntry>& entries) {
  if (entries.empty() || payload_kind(entries[0].payload) != RecordKind::ElectionParams)
    throw Error(Errc::Malformed, "transcript does not start with the election parameters");
  const auto group = payload_record<ElectionParams>(entries[0].payload).group;
  if (group == TestGroup::kName) return Backend::TestGroup;
  if (group == P256Group::kName) return Backend::ProdGroup;
  throw Error(Errc::Malformed, "unknown group " + group);
}

template <class F>
int dispatch(Backend b, F&& f) {
  if (b == Backend::TestGroup) return f.template operator()<TestGroup>();
  return f.template operator()<P256Group>();
}

template <class F>
int with_transcript(const fs::path& transcript, F&& f) {
  return dispatch(transcript_backend(load_transcript(transcript)), std::forward<F>(f));
}

std::uint32_t parse_voter(const std::string& s, std::uint32_t voters) {
  std::string digits = s;
  if (!digits.empty() && (digits[0] == 'V' || digits[0] == 'v')) digits.erase(0, 1);
  std::uint32_t n = 0;
  try {
    std::size_t used = 0;
    n = static_cast<std::uint32_t>(std::stoul(digits, &used));
    if (used != digits.size()) n = 0;
  } catch (const std::exception&) {
    n = 0;
  }
  if (n < 1 || n > voters) throw Error(Errc::NotOnRoll, "no voter " + s + " (1.." + std::to_string(voters) + ")");
  return n - 1;
}

std::uint32_t parse_candidate(const std::string& s, const std::vector<std::string>& candidates) {
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (candidates[i] == s) return static_cast<std::uint32_t>(i + 1);
  try {
    std::size_t used = 0;
    const auto n = std::stoul(s, &used);
    if (used == s.size() && n >= 1 && n <= candidates.size()) return static_cast<std::uint32_t>(n);
  } catch (const std::exception&) {
  }
  throw Error(Errc::InvalidConfig, "no candidate " + s);
}

std::string candidate_label(const std::vector<std::string>& candidates, std::uint32_t vote) {
  if (vote >= 1 && vote <= candidates.size()) return std::to_string(vote) + " (" + candidates[vote - 1] + ")";
  return std::to_string(vote);
}

void print_board(const std::vector<TallyRow>& board, const std::vector<std::string>& candidates) {
  const auto counts = tally_counts(board, candidates.size());
  std::cout << "tally board: " << board.size() << " rows\n";
  for (std::size_t c = 1; c < counts.size(); ++c)
    std::cout << "  " << candidate_label(candidates, static_cast<std::uint32_t>(c)) << ": " << counts[c] << "\n";
}

// ---------------------------------------------------------------------------
// Options shared by the authority commands

struct Paths {
  fs::path transcript;
  fs::path state;
  fs::path keys_dir;

  fs::path state_file() const { return state.empty() ? fs::path(transcript.string() + ".state") : state; }
  fs::path key_dir() const {
    if (!keys_dir.empty()) return keys_dir;
    auto parent = transcript.parent_path();
    return (parent.empty() ? fs::path(".") : parent) / (transcript.stem().string() + "-keys");
  }
};

void add_paths(CLI::App* cmd, Paths& p, bool keys = false) {
  cmd->add_option("--transcript", p.transcript, "bulletin board transcript file")->required();
  cmd->add_option("--state", p.state, "private state file (default <transcript>.state)");
  if (keys) cmd->add_option("--keys-dir", p.keys_dir, "voter key directory (default <transcript stem>-keys)");
}

template <class G>
Election<G> load_election(const Paths& p) {
  return Election<G>::load(p.transcript, p.state_file());
}

template <class G>
void save_election(const Election<G>& e, const Paths& p) {
  e.save(p.transcript, p.state_file());
  const auto snap = e.board().snapshot();
  std::cout << "transcript: " << snap.length << " entries, head " << to_hex(snap.head_hash) << "\n";
}

template <class G>
SeededRng command_rng(Election<G>& e, std::string_view label, std::optional<std::uint64_t> seed) {
  if (seed) return SeededRng(*seed).fork(std::string("electryo/cli/") + std::string(label));
  return e.next_rng(label);
}

// ---------------------------------------------------------------------------
// Authority commands

int cmd_setup(const Paths& p, const fs::path& config, std::optional<std::uint64_t> seed) {
  auto cfg = load_config(config);
  if (seed) cfg.seed = *seed;
  return dispatch(cfg.backend, [&]<class G>() {
    Election<G> e(cfg);
    e.setup();
    save_election(e, p);
    const auto dir = p.key_dir();
    fs::create_directories(dir);
    for (std::uint32_t i = 0; i < cfg.voters; ++i) {
      const auto& cred = e.credential(i);
      write_file(dir / (cred.id + ".key"), encode(VoterKeyFile<G>{e.election_id(), i, cred.id, cred.selene}));
    }
    std::cout << "election " << to_string(e.election_id()) << " on " << G::spec().name << "\n"
              << "candidates:";
    for (std::size_t c = 0; c < cfg.candidates.size(); ++c) std::cout << " " << c + 1 << "=" << cfg.candidates[c];
    std::cout << "\n" << cfg.voters << " voter key files in " << dir.string() << "\n";
    return 0;
  });
}

int cmd_vote(const Paths& p, const std::string& voter, const std::string& candidate, const fs::path& ballot_out) {
  return with_transcript(p.transcript, [&]<class G>() {
    auto e = load_election<G>(p);
    const auto v = parse_voter(voter, e.config().voters);
    const auto rc = e.cast(v, parse_candidate(candidate, e.config().candidates));
    if (!ballot_out.empty()) write_file(ballot_out, encode(e.paper_box().back()));
    save_election(e, p);
    std::cout << e.credential(v).id << " receipt code " << rc.text() << "\n";
    return 0;
  });
}

template <class Step>
int cmd_step(const Paths& p, Step step) {
  return with_transcript(p.transcript, [&]<class G>() {
    auto e = load_election<G>(p);
    step(e);
    save_election(e, p);
    if (e.parsed().board) print_board(*e.parsed().board, e.config().candidates);
    return 0;
  });
}

int cmd_notify(const Paths& p, const std::string& voter, const std::string& receipt, const fs::path& alpha_out) {
  return with_transcript(p.transcript, [&]<class G>() {
    auto e = load_election<G>(p);
    const auto v = parse_voter(voter, e.config().voters);
    const auto out = e.notify(v, receipt);
    save_election(e, p);
    const auto& id = e.credential(v).id;
    if (!out.gate_passed) {
      std::cout << id << ": receipt code does not match the counted ballot, no tracker sent\n";
      return 1;
    }
    if (out.suppressed) {
      std::cout << id << ": receipt code accepted, notification suppressed at the voter's request\n";
      return 0;
    }
    const auto path = alpha_out.empty() ? p.key_dir() / (id + ".alpha") : alpha_out;
    write_file(path, encode(*out.alpha));
    std::cout << id << ": receipt code accepted, alpha term written to " << path.string() << "\n";
    return 0;
  });
}

int cmd_coerce(const Paths& p, const std::string& voter, const std::string& candidate, const fs::path& alpha_out) {
  return with_transcript(p.transcript, [&]<class G>() {
    auto e = load_election<G>(p);
    const auto v = parse_voter(voter, e.config().voters);
    const auto out = e.coerce(v, parse_candidate(candidate, e.config().candidates));
    save_election(e, p);
    const auto& id = e.credential(v).id;
    const auto path = alpha_out.empty() ? p.key_dir() / (id + ".fake-alpha") : alpha_out;
    write_file(path, encode(out.fake));
    std::cout << id << ": genuine notification suppressed; fake alpha opens tracker " << out.fake_tracker
              << ", written to " << path.string() << "\n";
    return 0;
  });
}

int cmd_verify(const fs::path& transcript, const fs::path& report_out) {
  const auto entries = load_transcript(transcript);
  return dispatch(transcript_backend(entries), [&]<class G>() {
    const auto report = universal_verify<G>(entries);
    if (!report_out.empty()) write_file(report_out, encode(report));
    std::cout << report.render();
    return report.ok() ? 0 : 1;
  });
}

int cmd_audit(const Paths& p, std::optional<std::uint32_t> sample, const fs::path& paper,
              std::optional<std::uint64_t> seed) {
  return with_transcript(p.transcript, [&]<class G>() {
    auto e = load_election<G>(p);
    auto rng = command_rng(e, "audit", seed);
    int rc = 0;
    if (!paper.empty()) {
      const auto ballot = decode<PaperBallot<G>>(read_file(paper));
      const auto m = rla_paper_to_bb(e, ballot, rng);
      std::cout << "paper ballot " << ballot.box_serial << ": " << paper_match_name(m.kind);
      if (m.row) std::cout << " (stage-one row " << *m.row << ")";
      std::cout << "\n";
      rc = m.kind == PaperMatchKind::Unique ? 0 : 1;
    }
    if (sample) {
      const auto rec = rla_bb_to_paper(e, *sample, rng);
      std::cout << rec.notes << "\n"
                << "matches " << rec.matches << ", mismatches " << rec.mismatches << "\n";
      if (rec.mismatches) rc = 1;
    }
    if (paper.empty() && !sample) throw Error(Errc::InvalidConfig, "audit needs --sample-size or --paper");
    save_election(e, p);
    return rc;
  });
}

int cmd_dispute(const Paths& p, const std::string& voter, const std::string& claimed,
                std::optional<std::uint64_t> seed) {
  return with_transcript(p.transcript, [&]<class G>() {
    auto e = load_election<G>(p);
    const auto v = parse_voter(voter, e.config().voters);
    auto rng = command_rng(e, "dispute", seed);
    const auto out = resolve_dispute(e, {v, parse_candidate(claimed, e.config().candidates)}, rng);
    save_election(e, p);
    const auto& names = e.config().candidates;
    std::cout << "verdict: " << verdict_name(out.verdict) << "\n" << "finding: " << out.finding << "\n";
    if (out.electronic_vote) std::cout << "electronic vote: " << candidate_label(names, *out.electronic_vote) << "\n";
    if (out.paper_vote) std::cout << "paper vote: " << candidate_label(names, *out.paper_vote) << "\n";
    return 0;
  });
}

// ---------------------------------------------------------------------------
// Board inspection

int cmd_bb_verify(const fs::path& file) {
  const auto entries = decode_transcript(read_file(file));
  if (const auto brk = find_chain_break(entries)) {
    std::cout << "hash chain broken at entry " << *brk << "\n";
    return 1;
  }
  BulletinBoard bb(entries);
  std::map<Phase, std::size_t> counts;
  for (const auto& e : entries) ++counts[e.phase];
  std::cout << "hash chain intact, phase order respected\n";
  for (const auto& [phase, n] : counts) std::cout << "  " << phase_name(phase) << ": " << n << "\n";
  const auto snap = bb.snapshot();
  std::cout << snap.length << " entries, head " << to_hex(snap.head_hash) << "\n";
  return 0;
}

int cmd_bb_show(const fs::path& file) {
  const auto entries = load_transcript(file);
  for (const auto& e : entries) {
    std::string kind = "?";
    try {
      kind = record_name(payload_kind(e.payload));
    } catch (const Error&) {
    }
    std::cout << e.seq << "  " << phase_name(e.phase) << "  " << e.author << "  " << kind << "  "
              << e.payload.size() << " bytes  " << to_hex(e.entry_hash).substr(0, 16) << "\n";
  }
  return 0;
}

int cmd_report(const fs::path& file) {
  const auto report = decode<VerifyReport>(read_file(file));
  std::cout << report.render();
  return report.ok() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Voter device

template <class G>
struct VoterView {
  VoterKeyFile<G> key;
  ParsedTranscript<G> t;
  Element<G> commitment;
};

template <class G>
VoterView<G> voter_view(const std::vector<BbEntry>& entries, const fs::path& key_file) {
  VoterView<G> v{decode<VoterKeyFile<G>>(read_file(key_file)), parse_transcript<G>(entries), {}};
  if (v.key.election_id != v.t.election_id()) throw Error(Errc::Malformed, "key file belongs to another election");
  if (!v.t.prevote || v.key.index >= v.t.prevote->size())
    throw Error(Errc::Malformed, "transcript has no tracker commitment for " + v.key.id);
  const auto& row = v.t.prevote->at(v.key.index);
  if (row.id != v.key.id || row.pk != v.key.selene.pk)
    throw Error(Errc::Malformed, "key file does not match the published roll entry");
  v.commitment = row.commitment;
  return v;
}

int cmd_retrieve(const fs::path& transcript, const fs::path& key_file, const fs::path& alpha_file) {
  const auto entries = load_transcript(transcript);
  return dispatch(transcript_backend(entries), [&]<class G>() {
    const auto v = voter_view<G>(entries, key_file);
    const auto alpha = decode<AlphaTerm<G>>(read_file(alpha_file));
    if (alpha.voter != v.key.index) throw Error(Errc::Malformed, "alpha term is addressed to another voter");
    const auto tracker = retrieve_tracker<G>(v.key.selene.sk, alpha.alpha, v.commitment, v.t.params->voters);
    std::cout << v.key.id << ": tracker " << tracker << "\n";
    if (v.t.board) {
      if (auto vote = board_vote(*v.t.board, tracker))
        std::cout << "board shows vote " << candidate_label(v.t.params->candidates, *vote) << "\n";
      else
        std::cout << "tracker not on the board\n";
    }
    return 0;
  });
}

int cmd_fake_alpha(const fs::path& transcript, const fs::path& key_file, std::optional<std::uint64_t> target,
                   const std::string& candidate, const fs::path& out, std::optional<std::uint64_t> seed) {
  const auto entries = load_transcript(transcript);
  return dispatch(transcript_backend(entries), [&]<class G>() {
    const auto v = voter_view<G>(entries, key_file);
    std::uint64_t tracker = 0;
    if (target) {
      tracker = *target;
    } else {
      if (candidate.empty()) throw Error(Errc::InvalidConfig, "fake-alpha needs --tracker or --candidate");
      if (!v.t.board) throw Error(Errc::PhaseOrderViolation, "tally board is not published yet");
      const auto want = parse_candidate(candidate, v.t.params->candidates);
      std::vector<std::uint64_t> options;
      for (const auto& row : *v.t.board)
        if (row.vote == want) options.push_back(row.tracker);
      if (options.empty()) throw Error(Errc::ScenarioFailed, "no board row shows candidate " + candidate);
      std::unique_ptr<RandomSource> rng;
      if (seed) rng = std::make_unique<SeededRng>(SeededRng(*seed).fork("electryo/cli/fake-alpha"));
      else rng = std::make_unique<SystemRng>();
      tracker = options[rng->uniform(options.size())];
    }
    const auto fake = fake_alpha<G>(v.key.index, v.key.selene.sk, v.commitment, tracker, v.t.params->voters);
    write_file(out, encode(fake));
    std::cout << v.key.id << ": fake alpha opens tracker " << tracker << ", written to " << out.string() << "\n";
    return 0;
  });
}

// ---------------------------------------------------------------------------
// Scripted runs

Script load_script(const fs::path& path, const ElectionConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidConfig, "cannot open script " + path.string());
  Script s;
  try {
    const auto j = json::parse(in);
    for (const auto& a : j.at("voters")) {
      VoterAction act;
      const auto kind = a.value("action", std::string("vote"));
      if (kind == "abstain") act.kind = VoterActionKind::Abstain;
      else if (kind == "vote") act.kind = VoterActionKind::Vote;
      else if (kind == "coerced") act.kind = VoterActionKind::CoercedVote;
      else throw Error(Errc::InvalidConfig, "unknown voter action " + kind);
      if (act.kind != VoterActionKind::Abstain) act.candidate = parse_candidate(a.at("candidate").get<std::string>(), cfg.candidates);
      if (act.kind == VoterActionKind::CoercedVote)
        act.coercer_candidate = parse_candidate(a.at("coercer").get<std::string>(), cfg.candidates);
      act.check = a.value("check", true);
      s.voters.push_back(act);
    }
    if (j.contains("audit_sample")) s.audit_sample = j["audit_sample"].get<std::uint32_t>();
    for (const auto& d : j.value("disputes", json::array()))
      s.disputes.push_back({parse_voter(d.at("voter").get<std::string>(), cfg.voters),
                            parse_candidate(d.at("claimed").get<std::string>(), cfg.candidates)});
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidConfig, "script " + path.string() + ": " + e.what());
  }
  return s;
}

int cmd_scenario(const fs::path& config, const fs::path& script_file, const fs::path& transcript,
                 const fs::path& report_out, std::optional<std::uint64_t> seed) {
  auto cfg = load_config(config);
  if (seed) cfg.seed = *seed;
  const auto script = load_script(script_file, cfg);
  return dispatch(cfg.backend, [&]<class G>() {
    const auto r = run_scenario<G>(cfg, script);
    if (!transcript.empty()) save_transcript(transcript, r.transcript);
    if (!report_out.empty()) write_file(report_out, encode(r.verification));
    std::size_t abstained = 0;
    for (const auto& v : r.voters) {
      if (v.action == VoterActionKind::Abstain) {
        ++abstained;
        continue;
      }
      std::cout << voter_id(v.voter) << ":";
      if (v.receipt) std::cout << " receipt " << *v.receipt;
      if (v.tracker) std::cout << " tracker " << *v.tracker;
      if (v.board_vote) std::cout << " shows " << candidate_label(cfg.candidates, *v.board_vote);
      if (v.real_tracker) {
        std::cout << " (coerced; genuine tracker " << *v.real_tracker;
        if (v.real_board_vote) std::cout << " shows " << candidate_label(cfg.candidates, *v.real_board_vote);
        std::cout << ")";
      }
      std::cout << "\n";
    }
    std::cout << abstained << " voter(s) abstained\n";
    if (r.audit) std::cout << "audit: " << r.audit->first << " matches, " << r.audit->second << " mismatches\n";
    for (const auto& d : r.disputes) std::cout << "dispute: " << verdict_name(d.verdict) << ", " << d.finding << "\n";
    for (const auto& f : r.failures) std::cout << "FAILURE " << f << "\n";
    std::cout << r.verification.render();
    return r.ok() ? 0 : 1;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electryo polling-station election tool"};
  app.require_subcommand(1);
  Paths paths;
  fs::path config, file, out, alpha, key;
  std::optional<std::uint64_t> seed, target;
  std::optional<std::uint32_t> sample;
  std::string voter, candidate, receipt;

  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", seed, "seed for randomness"); };

  auto setup = app.add_subcommand("setup", "create the election, run tracker setup, write voter key files");
  add_paths(setup, paths, true);
  setup->add_option("--config", config, "election config (JSON)")->required()->check(CLI::ExistingFile);
  add_seed(setup);

  auto vote = app.add_subcommand("vote", "one voter's visit to the polling station; prints the receipt code");
  add_paths(vote, paths);
  vote->add_option("--voter", voter, "voter id (V0001) or number")->required();
  vote->add_option("--candidate", candidate, "candidate number or name")->required();
  vote->add_option("--ballot-out", out, "write the paper ballot to this file");

  auto close = app.add_subcommand("close", "close the polls");
  add_paths(close, paths);
  auto mix = app.add_subcommand("mix", "screen, mix and check eligibility of cast ballots");
  add_paths(mix, paths);
  auto tally = app.add_subcommand("tally", "mix tracker/vote pairs and publish the tally board");
  add_paths(tally, paths);

  auto notify = app.add_subcommand("notify", "check a receipt code and send the voter's alpha term");
  add_paths(notify, paths, true);
  notify->add_option("--voter", voter)->required();
  notify->add_option("--receipt", receipt, "6-digit receipt code")->required();
  notify->add_option("--alpha-out", out, "alpha file (default <keys-dir>/<id>.alpha)");

  auto coerce = app.add_subcommand("coerce", "suppress notification and produce a fake alpha term");
  add_paths(coerce, paths, true);
  coerce->add_option("--voter", voter)->required();
  coerce->add_option("--candidate", candidate, "candidate the coercer demands")->required();
  coerce->add_option("--alpha-out", out, "fake alpha file (default <keys-dir>/<id>.fake-alpha)");

  auto verify = app.add_subcommand("verify", "universal verification of a transcript");
  verify->add_option("--transcript", paths.transcript)->required()->check(CLI::ExistingFile);
  verify->add_option("--report", out, "write the canonical report to this file");

  auto audit = app.add_subcommand("audit", "risk-limiting audit between board and paper");
  add_paths(audit, paths);
  audit->add_option("--sample-size", sample, "number of counted ballots to compare with paper");
  audit->add_option("--paper", file, "paper ballot file to match against the board");
  add_seed(audit);

  auto dispute = app.add_subcommand("dispute", "resolve a voter's complaint about their vote");
  add_paths(dispute, paths);
  dispute->add_option("--voter", voter)->required();
  dispute->add_option("--claimed", candidate, "vote the voter says they cast")->required();
  add_seed(dispute);

  auto bb = app.add_subcommand("bb", "bulletin board transcript tools");
  bb->require_subcommand(1);
  auto bb_verify = bb->add_subcommand("verify", "check hash chain and phase order");
  bb_verify->add_option("file", file)->required()->check(CLI::ExistingFile);
  auto bb_show = bb->add_subcommand("show", "list transcript entries");
  bb_show->add_option("file", file)->required()->check(CLI::ExistingFile);

  auto report = app.add_subcommand("report", "render a saved verification report");
  report->add_option("file", file)->required()->check(CLI::ExistingFile);

  auto voter_cmd = app.add_subcommand("voter", "voter device operations");
  voter_cmd->require_subcommand(1);
  auto retrieve = voter_cmd->add_subcommand("retrieve-tracker", "open the tracker commitment with an alpha term");
  retrieve->add_option("--transcript", paths.transcript)->required()->check(CLI::ExistingFile);
  retrieve->add_option("--key", key, "voter key file")->required()->check(CLI::ExistingFile);
  retrieve->add_option("--alpha", alpha, "alpha term file")->required()->check(CLI::ExistingFile);
  auto fake = voter_cmd->add_subcommand("fake-alpha", "compute an alpha term opening to another tracker");
  fake->add_option("--transcript", paths.transcript)->required()->check(CLI::ExistingFile);
  fake->add_option("--key", key, "voter key file")->required()->check(CLI::ExistingFile);
  auto target_opt = fake->add_option("--tracker", target, "tracker to open to");
  fake->add_option("--candidate", candidate, "pick a board tracker showing this candidate")->excludes(target_opt);
  fake->add_option("--out", out, "output alpha file")->required();
  add_seed(fake);

  auto scenario = app.add_subcommand("scenario", "run a whole scripted election");
  scenario->add_option("--config", config)->required()->check(CLI::ExistingFile);
  scenario->add_option("--script", file, "voter script (JSON)")->required()->check(CLI::ExistingFile);
  scenario->add_option("--transcript", paths.transcript, "write the transcript here");
  scenario->add_option("--report", out, "write the canonical verification report here");
  add_seed(scenario);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*setup) return cmd_setup(paths, config, seed);
    if (*vote) return cmd_vote(paths, voter, candidate, out);
    if (*close) return cmd_step(paths, [](auto& e) { e.close_voting(); });
    if (*mix) return cmd_step(paths, [](auto& e) { e.mix(); });
    if (*tally) return cmd_step(paths, [](auto& e) { e.tally(); });
    if (*notify) return cmd_notify(paths, voter, receipt, out);
    if (*coerce) return cmd_coerce(paths, voter, candidate, out);
    if (*verify) return cmd_verify(paths.transcript, out);
    if (*audit) return cmd_audit(paths, sample, file, seed);
    if (*dispute) return cmd_dispute(paths, voter, candidate, seed);
    if (*bb_verify) return cmd_bb_verify(file);
    if (*bb_show) return cmd_bb_show(file);
    if (*report) return cmd_report(file);
    if (*retrieve) return cmd_retrieve(paths.transcript, key, alpha);
    if (*fake) return cmd_fake_alpha(paths.transcript, key, target, candidate, out, seed);
    if (*scenario) return cmd_scenario(config, file, paths.transcript, out, seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what();
    if (e.index()) std::cerr << " (index " << e.index() << ")";
    std::cerr << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
