// Operator entry point: corpus generation, exploration-sequence search and
// verification, bound tables, rendezvous and team-protocol runs and sweeps,
// lemma probes, trace replay.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rvsim/bounds.hpp"
#include "rvsim/corpus.hpp"
#include "rvsim/prng.hpp"
#include "rvsim/rendezvous.hpp"
#include "rvsim/route_program.hpp"
#include "rvsim/runs.hpp"
#include "rvsim/sgl.hpp"
#include "rvsim/traj.hpp"
#include "rvsim/uxs.hpp"

namespace {

using namespace rvsim;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::shared_ptr<const UxsProvider> load_provider(const std::string& spec) {
  if (spec == "constant1") return toy_length_function(ToyShape::Constant1);
  if (spec == "linear") return toy_length_function(ToyShape::Linear);
  return CertifiedProvider::parse(read_file(spec));
}

std::string config_banner(const std::string& what, std::uint64_t seed,
                          const std::string& corpus_hash, const std::string& uxs_hash) {
  std::ostringstream out;
  out << "# " << what << " seed=" << seed << " corpus=" << corpus_hash
      << " uxs=" << uxs_hash << "\n";
  return out.str();
}

int cmd_gen_corpus(std::int32_t nmax, std::int32_t labelings, std::uint64_t seed,
                   const std::string& out_path) {
  GraphCorpus corpus = generate_corpus(nmax, labelings, seed);
  write_file(out_path, corpus.serialize());
  std::cout << "corpus: " << corpus.entries.size() << " entries, hash "
            << hex16(corpus.content_hash()) << " -> " << out_path << "\n";
  return 0;
}

int cmd_find_uxs(const std::string& corpus_path, std::int32_t kmax,
                 std::uint64_t budget, std::uint64_t seed, bool share_down,
                 const std::string& out_path) {
  GraphCorpus corpus = GraphCorpus::parse(read_file(corpus_path));
  auto provider = build_certified_provider(corpus, kmax, budget, seed, share_down);
  write_file(out_path, provider->serialize());
  std::cout << "certified sequences up to k=" << kmax << ", P: ";
  for (std::uint64_t k = 1; k <= static_cast<std::uint64_t>(kmax); ++k)
    std::cout << provider->length(k) << (k < static_cast<std::uint64_t>(kmax) ? "," : "");
  std::cout << " -> " << out_path << "\n";
  return 0;
}

int cmd_verify_uxs(const std::string& corpus_path, const std::string& uxs_path) {
  GraphCorpus corpus = GraphCorpus::parse(read_file(corpus_path));
  auto provider = CertifiedProvider::parse(read_file(uxs_path));
  if (provider->corpus_hash() != corpus.content_hash()) {
    std::cerr << "manifest was certified against a different corpus ("
              << hex16(provider->corpus_hash()) << " vs "
              << hex16(corpus.content_hash()) << ")\n";
    return 2;
  }
  if (auto failure = verify_provider(*provider, corpus)) {
    std::cerr << "verification FAILED: " << *failure << "\n";
    return 1;
  }
  std::cout << "all sequences integral on every corpus graph and start\n";
  return 0;
}

int cmd_bound(std::uint64_t n, std::uint64_t m, const std::string& provider_spec,
              bool table) {
  auto provider = load_provider(provider_spec);
  std::cout << "Pi(" << n << "," << m
            << ") = " << compute_pi(n, m, provider).to_decimal() << "\n";
  if (table) std::cout << starred_table(n, m, provider);
  return 0;
}

int cmd_run_rv(const std::string& graph_path, std::uint64_t l1, std::uint64_t l2,
               std::int32_t s1, std::int32_t s2, const std::string& scheduler,
               std::uint64_t seed, std::uint64_t cap,
               const std::string& provider_spec, const std::string& trace_path) {
  RunSetup setup;
  setup.protocol = "rendezvous";
  setup.graph_text = read_file(graph_path);
  setup.agents = {{l1, s1, "val-" + std::to_string(l1)},
                  {l2, s2, "val-" + std::to_string(l2)}};
  setup.scheduler = scheduler;
  setup.seed = seed;
  setup.engine.event_cap = cap;
  if (provider_spec == "constant1" || provider_spec == "linear") {
    setup.provider_kind = "toy:" + provider_spec;
  } else {
    setup.provider_kind = "certified";
    setup.provider_manifest = read_file(provider_spec);
  }
  RunArtifacts art = execute_run(setup);
  if (!trace_path.empty()) write_file(trace_path, art.trace);
  std::cout << (art.met ? "met" : "NOT met") << " after " << art.events
            << " events, total cost " << art.total_cost << "\n";
  return art.met ? 0 : 1;
}

int cmd_sweep_rv(const std::string& corpus_path, const std::string& uxs_path,
                 const std::string& labels_csv, std::uint32_t seeds,
                 std::uint64_t cap, unsigned threads, const std::string& out_path) {
  GraphCorpus corpus = GraphCorpus::parse(read_file(corpus_path));
  auto provider = CertifiedProvider::parse(read_file(uxs_path));
  RvSweepConfig cfg;
  cfg.labels.clear();
  std::istringstream ls(labels_csv);
  std::string item;
  while (std::getline(ls, item, ',')) cfg.labels.push_back(std::stoull(item));
  cfg.random_seeds = seeds;
  cfg.event_cap = cap;
  cfg.threads = threads;
  RvSweepResult res = sweep_rendezvous(corpus, provider, cfg);
  std::ostringstream out;
  out << config_banner("sweep-rv", 0, hex16(corpus.content_hash()),
                       hex16(fnv1a64(provider->serialize())));
  out << rv_sweep_tsv_header();
  for (const RvSweepRow& row : res.rows) out << rv_sweep_tsv_row(row);
  write_file(out_path, out.str());
  std::cout << res.met << " met, " << res.unmet << " unmet, " << res.bound_exceeded
            << " bound violations -> " << out_path << "\n";
  return res.unmet == 0 && res.bound_exceeded == 0 ? 0 : 1;
}

int cmd_probe_lemma(const std::string& corpus_path, const std::string& lemma,
                    std::uint32_t seeds, std::int32_t max_nodes, std::uint64_t cap) {
  GraphCorpus corpus = GraphCorpus::parse(read_file(corpus_path));
  auto toy = toy_length_function(ToyShape::Constant1);
  std::uint64_t violations = 0;
  for (const CorpusEntry& e : corpus.entries) {
    if (e.graph.node_count() > max_nodes) continue;
    ProbeReport rep = lemma_probe(e.graph, 1, 2, lemma, seeds, toy, cap);
    std::cout << e.tag << "\t" << lemma << "\tviolations=" << rep.violations
              << "\tchecked=" << rep.pass_checked << "\tvacuous=" << rep.pass_vacuous
              << "\tunreached=" << rep.unreached << "\n";
    violations += rep.violations;
    for (const std::string& d : rep.violation_details)
      std::cerr << "violation: " << e.tag << ": " << d << "\n";
  }
  return violations == 0 ? 0 : 1;
}

int cmd_run_sgl(const std::string& graph_path, const std::string& labels_csv,
                const std::string& starts_csv, const std::string& scheduler,
                std::uint64_t seed, std::uint64_t cap,
                const std::string& provider_spec, const std::string& trace_path,
                const std::string& report_path) {
  RunSetup setup;
  setup.protocol = "sgl";
  setup.graph_text = read_file(graph_path);
  std::vector<std::uint64_t> labels;
  std::vector<std::int32_t> starts;
  {
    std::istringstream ls(labels_csv);
    std::string item;
    while (std::getline(ls, item, ',')) labels.push_back(std::stoull(item));
    std::istringstream ss(starts_csv);
    while (std::getline(ss, item, ',')) starts.push_back(std::stoi(item));
  }
  if (labels.size() != starts.size())
    throw std::runtime_error("labels and starts must align");
  for (std::size_t i = 0; i < labels.size(); ++i)
    setup.agents.push_back(SglAgentConfig{labels[i], starts[i],
                                          "val-" + std::to_string(labels[i])});
  setup.scheduler = scheduler;
  setup.seed = seed;
  setup.engine.event_cap = cap;
  if (provider_spec == "constant1" || provider_spec == "linear") {
    setup.provider_kind = "toy:" + provider_spec;
  } else {
    setup.provider_kind = "certified";
    setup.provider_manifest = read_file(provider_spec);
  }
  PortLabeledGraph g = PortLabeledGraph::parse(setup.graph_text);
  setup.est_max_n = g.node_count() + 1;
  RunArtifacts art = execute_run(setup);
  if (!trace_path.empty()) write_file(trace_path, art.trace);
  if (!report_path.empty()) {
    auto sched = make_scheduler(setup.scheduler, setup.seed);
    SglConfig cfg;
    cfg.est_max_n = setup.est_max_n;
    cfg.event_cap = cap;
    SglRunReport rep =
        run_sgl(g, setup.agents, *sched, setup.make_provider(), cfg);
    write_file(report_path, rep.to_json() + "\n");
  }
  std::cout << (art.all_output ? "all agents output" : "INCOMPLETE") << " after "
            << art.events << " events, total cost " << art.total_cost << "\n";
  return art.all_output ? 0 : 1;
}

int cmd_sweep_sgl(const std::string& corpus_path, const std::string& uxs_path,
                  std::uint32_t placements, std::uint32_t seeds, std::uint64_t cap,
                  unsigned threads, const std::string& out_path) {
  GraphCorpus corpus = GraphCorpus::parse(read_file(corpus_path));
  auto provider = CertifiedProvider::parse(read_file(uxs_path));
  SglSweepConfig cfg;
  cfg.placements = placements;
  cfg.random_seeds = seeds;
  cfg.event_cap = cap;
  cfg.threads = threads;
  SglSweepResult res = sweep_sgl(corpus, provider, cfg);
  std::ostringstream out;
  out << config_banner("sweep-sgl", cfg.placement_seed, hex16(corpus.content_hash()),
                       hex16(fnv1a64(provider->serialize())));
  out << sgl_sweep_tsv_header();
  for (const SglSweepRow& row : res.rows) out << sgl_sweep_tsv_row(row);
  write_file(out_path, out.str());
  std::cout << res.ok << " ok, " << res.failed << " failed -> " << out_path << "\n";
  return res.failed == 0 ? 0 : 1;
}

int cmd_replay(const std::string& trace_path) {
  std::string trace = read_file(trace_path);
  std::string regen;
  bool same = replay_trace(trace, &regen);
  if (same) {
    std::cout << "replay is byte-identical (" << trace.size() << " bytes)\n";
    return 0;
  }
  std::cerr << "replay DIVERGED\n";
  return 1;
}

int cmd_traj_dump(const std::string& form, std::uint64_t k,
                  const std::string& provider_spec, std::uint64_t max_moves) {
  auto provider = load_provider(provider_spec);
  LengthCalculus calc(provider);
  TrajForm f;
  std::string name = form;
  if (name == "R") f = TrajForm::R;
  else if (name == "X") f = TrajForm::X;
  else if (name == "Q") f = TrajForm::Q;
  else if (name == "Y") f = TrajForm::Y;
  else if (name == "Z") f = TrajForm::Z;
  else if (name == "A") f = TrajForm::A;
  else if (name == "B") f = TrajForm::B;
  else if (name == "K") f = TrajForm::K;
  else if (name == "Omega") f = TrajForm::Omega;
  else throw std::runtime_error("unknown form " + form);

  nlohmann::ordered_json j;
  j["expr"] = TrajExpr::named(f, k).to_string();
  j["nodes"] = calc.named_length(f, k).to_decimal();
  nlohmann::ordered_json lengths;
  for (TrajForm g : {TrajForm::R, TrajForm::X, TrajForm::Q, TrajForm::Y, TrajForm::Z,
                     TrajForm::A}) {
    lengths[traj_form_name(g)] = calc.named_length(g, k).to_decimal();
  }
  j["length_table"] = std::move(lengths);
  std::cout << j.dump(2) << "\n";

  // Annotation stream of the rendezvous route prefix for label 1, as JSON
  // lines on an abstract regular host (degree 2, entry mirrors exit).
  RouteProgram prog = RouteProgram::rv_algorithm(modified_label(1), provider);
  for (std::uint64_t i = 0; i < max_moves; ++i) {
    std::int32_t exit = prog.next_exit(2);
    const Annotation& ann = prog.last_annotation();
    nlohmann::ordered_json line;
    line["move"] = i;
    line["exit"] = exit;
    line["piece"] = ann.piece;
    line["bit"] = ann.bit_index;
    line["elem"] = elem_kind_name(ann.kind);
    line["offset"] = ann.offset;
    std::cout << line.dump() << "\n";
    prog.arrived(exit);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asynchronous rendezvous and team-protocol simulator"};
  app.require_subcommand(1);

  // gen-corpus
  std::int32_t nmax = 5, labelings = 25;
  std::uint64_t seed = 7;
  std::string out_path = "corpus.txt";
  auto* gen = app.add_subcommand("gen-corpus", "generate the graph test corpus");
  gen->add_option("--nmax", nmax);
  gen->add_option("--labelings", labelings);
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path);

  // find-uxs
  std::string corpus_path = "corpus.txt";
  std::int32_t kmax = 5;
  std::uint64_t budget = 30000000000ull;
  bool share_down = false;
  std::string uxs_out = "uxs.txt";
  auto* fu = app.add_subcommand("find-uxs", "search exploration sequences");
  fu->add_option("--corpus", corpus_path);
  fu->add_option("--kmax", kmax);
  fu->add_option("--budget", budget);
  fu->add_option("--seed", seed);
  fu->add_flag("--share-down", share_down,
               "reuse the kmax sequence at every level (richer low-level walks)");
  fu->add_option("--out", uxs_out);

  // verify-uxs
  std::string uxs_path = "uxs.txt";
  auto* vu = app.add_subcommand("verify-uxs", "re-verify a sequence manifest");
  vu->add_option("--corpus", corpus_path);
  vu->add_option("--uxs", uxs_path);

  // bound
  std::uint64_t bn = 2, bm = 1;
  std::string provider_spec = "constant1";
  bool table = false;
  auto* bd = app.add_subcommand("bound", "evaluate the meeting-cost bound");
  bd->add_option("--n", bn);
  bd->add_option("--m", bm);
  bd->add_option("--p", provider_spec, "constant1|linear|<uxs manifest path>");
  bd->add_flag("--table", table);

  // run-rv
  std::string graph_path;
  std::uint64_t l1 = 1, l2 = 2;
  std::int32_t s1 = 0, s2 = 1;
  std::string scheduler = "round_robin";
  std::uint64_t cap = 500000;
  std::string trace_path;
  auto* rr = app.add_subcommand("run-rv", "single rendezvous run");
  rr->add_option("--graph", graph_path)->required();
  rr->add_option("--l1", l1);
  rr->add_option("--l2", l2);
  rr->add_option("--s1", s1);
  rr->add_option("--s2", s2);
  rr->add_option("--scheduler", scheduler);
  rr->add_option("--seed", seed);
  rr->add_option("--cap", cap);
  rr->add_option("--p", provider_spec);
  rr->add_option("--trace", trace_path);

  // sweep-rv
  std::string labels_csv = "1,2,3,5,12";
  std::uint32_t seeds = 20;
  unsigned threads = 2;
  std::string sweep_out = "sweep-rv.tsv";
  auto* sr = app.add_subcommand("sweep-rv", "full rendezvous sweep");
  sr->add_option("--corpus", corpus_path);
  sr->add_option("--uxs", uxs_path);
  sr->add_option("--labels", labels_csv);
  sr->add_option("--seeds", seeds);
  sr->add_option("--cap", cap);
  sr->add_option("--threads", threads);
  sr->add_option("--out", sweep_out);

  // probe-lemma
  std::string lemma = "3.2";
  std::uint32_t probe_seeds = 200;
  std::int32_t probe_nmax = 3;
  auto* pl = app.add_subcommand("probe-lemma", "synchronization lemma probes");
  pl->add_option("--corpus", corpus_path);
  pl->add_option("--lemma", lemma, "3.2|3.3|3.4|3.5|properties");
  pl->add_option("--seeds", probe_seeds);
  pl->add_option("--nmax", probe_nmax);
  pl->add_option("--cap", cap);

  // run-sgl
  std::string starts_csv = "0,1";
  std::string report_path;
  auto* rs = app.add_subcommand("run-sgl", "single team-protocol run");
  rs->add_option("--graph", graph_path)->required();
  rs->add_option("--labels", labels_csv);
  rs->add_option("--starts", starts_csv);
  rs->add_option("--scheduler", scheduler);
  rs->add_option("--seed", seed);
  rs->add_option("--cap", cap);
  rs->add_option("--p", provider_spec);
  rs->add_option("--trace", trace_path);
  rs->add_option("--report", report_path);

  // sweep-sgl
  std::uint32_t placements = 10;
  auto* ss = app.add_subcommand("sweep-sgl", "full team-protocol sweep");
  ss->add_option("--corpus", corpus_path);
  ss->add_option("--uxs", uxs_path);
  ss->add_option("--placements", placements);
  ss->add_option("--seeds", seeds);
  ss->add_option("--cap", cap);
  ss->add_option("--threads", threads);
  ss->add_option("--out", sweep_out);

  // replay
  auto* rp = app.add_subcommand("replay", "re-execute a trace and compare bytes");
  rp->add_option("--trace", trace_path)->required();

  // traj-dump
  std::string form = "X";
  std::uint64_t dump_k = 2;
  std::uint64_t dump_moves = 32;
  auto* td = app.add_subcommand("traj-dump", "expression/length/annotation dump");
  td->add_option("--form", form);
  td->add_option("--k", dump_k);
  td->add_option("--p", provider_spec);
  td->add_option("--moves", dump_moves);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_corpus(nmax, labelings, seed, out_path);
    if (fu->parsed())
      return cmd_find_uxs(corpus_path, kmax, budget, seed, share_down, uxs_out);
    if (vu->parsed()) return cmd_verify_uxs(corpus_path, uxs_path);
    if (bd->parsed()) return cmd_bound(bn, bm, provider_spec, table);
    if (rr->parsed())
      return cmd_run_rv(graph_path, l1, l2, s1, s2, scheduler, seed, cap,
                        provider_spec, trace_path);
    if (sr->parsed())
      return cmd_sweep_rv(corpus_path, uxs_path, labels_csv, seeds, cap, threads,
                          sweep_out);
    if (pl->parsed()) return cmd_probe_lemma(corpus_path, lemma, probe_seeds,
                                             probe_nmax, cap);
    if (rs->parsed())
      return cmd_run_sgl(graph_path, labels_csv, starts_csv, scheduler, seed, cap,
                         provider_spec, trace_path, report_path);
    if (ss->parsed())
      return cmd_sweep_sgl(corpus_path, uxs_path, placements, seeds, cap, threads,
                           sweep_out);
    if (rp->parsed()) return cmd_replay(trace_path);
    if (td->parsed()) return cmd_traj_dump(form, dump_k, provider_spec, dump_moves);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
