#include <doctest.h>

#include <set>

#include "rvsim/corpus.hpp"
#include "rvsim/sgl.hpp"

using namespace rvsim;

namespace {

std::shared_ptr<CertifiedProvider> provider4() {
  // Shared-down certification keeps every route piece integral on the whole
  // corpus; protocol runs stay short.
  static std::shared_ptr<CertifiedProvider> p = [] {
    GraphCorpus c = generate_corpus(4, 25, 7);
    return build_certified_provider(c, 4, 30000000000ull, 7, true);
  }();
  return p;
}

std::vector<SglAgentConfig> team(std::initializer_list<std::pair<std::uint64_t, std::int32_t>> spec) {
  std::vector<SglAgentConfig> agents;
  for (auto [label, start] : spec)
    agents.push_back(SglAgentConfig{label, start, "val-" + std::to_string(label)});
  return agents;
}

}  // namespace

TEST_CASE("derive_outputs rank and gossip") {
  Bag bag{{2, "x"}, {7, "y"}};
  ProblemOutputs o = derive_outputs(bag, 7);
  CHECK(o.team_size == 2);
  CHECK(o.leader == 2);
  CHECK(o.new_name == 2);
  CHECK(o.gossip == std::vector<std::string>{"x", "y"});

  Bag three{{1, "a"}, {3, "b"}, {8, "c"}};
  ProblemOutputs t = derive_outputs(three, 3);
  CHECK(t.team_size == 3);
  CHECK(t.leader == 1);
  CHECK(t.new_name == 2);

  Bag single{{5, "z"}};
  CHECK_THROWS(derive_outputs(single, 5));
}

TEST_CASE("full edge tour covers every directed port and closes") {
  for (std::int32_t n = 2; n <= 5; ++n) {
    PortLabeledGraph g = make_complete(n);
    for (std::int32_t s = 0; s < n; ++s) {
      auto tour = full_edge_tour(g, s);
      CHECK(tour.size() == static_cast<std::size_t>(2 * g.edge_count()));
      std::int32_t cur = s;
      std::set<std::pair<std::int32_t, std::int32_t>> used;
      for (std::int32_t p : tour) {
        CHECK(used.insert({cur, p}).second);
        cur = g.step(cur, p).node;
      }
      CHECK(cur == s);
    }
  }
}

TEST_CASE("sgl end to end with two agents on the path") {
  PortLabeledGraph g = make_path(2);
  auto agents = team({{7, 0}, {3, 1}});
  RoundRobinScheduler sched;
  SglConfig cfg;
  cfg.est_max_n = 3;
  SglRunReport r = run_sgl(g, agents, sched, provider4(), cfg);
  std::string why;
  CHECK_MESSAGE(check_sgl_report(r, agents, &why), why);
  // Smaller label 3 becomes the token; 7 the explorer.
  for (const SglAgentReport& ar : r.agents) {
    if (ar.label == 3) CHECK(ar.final_role == SglRole::Token);
    if (ar.label == 7) CHECK(ar.final_role == SglRole::Explorer);
  }
  CHECK(r.tokens_created == 1);
  CHECK(r.max_meeting_entries <= 2);
}

TEST_CASE("sgl with three agents on the triangle") {
  PortLabeledGraph g = make_cycle(3, true);
  auto agents = team({{2, 0}, {5, 1}, {9, 2}});
  RandomScheduler sched(77);
  SglConfig cfg;
  cfg.est_max_n = 4;
  SglRunReport r = run_sgl(g, agents, sched, provider4(), cfg);
  std::string why;
  CHECK_MESSAGE(check_sgl_report(r, agents, &why), why);
  CHECK(r.max_meeting_entries <= 3);
  // Exactly the smallest agent of the first traveller meeting becomes a
  // token; over the whole run tokens never exceed explorers+1.
  CHECK(r.tokens_created >= 1);
}

TEST_CASE("sgl across schedulers and small graphs") {
  GraphCorpus corpus = generate_corpus(4, 3, 13);
  auto provider = provider4();
  for (std::size_t gi = 0; gi < corpus.entries.size(); gi += 4) {
    const PortLabeledGraph& g = corpus.entries[gi].graph;
    if (g.node_count() < 3) continue;
    auto agents = team({{4, 0}, {11, 1}, {6, 2}});
    for (const char* spec : {"round_robin", "random"}) {
      auto sched = make_scheduler(spec, 5);
      SglConfig cfg;
      cfg.est_max_n = g.node_count() + 1;
      SglRunReport r = run_sgl(g, agents, *sched, provider, cfg);
      std::string why;
      CHECK_MESSAGE(check_sgl_report(r, agents, &why),
                    corpus.entries[gi].tag << " " << spec << ": " << why);
    }
  }
}

TEST_CASE("sgl rejects degenerate teams") {
  PortLabeledGraph g = make_path(3);
  RoundRobinScheduler sched;
  SglConfig cfg;
  CHECK_THROWS(run_sgl(g, team({{1, 0}}), sched, provider4(), cfg));
  CHECK_THROWS(run_sgl(g, team({{1, 0}, {1, 1}}), sched, provider4(), cfg));
}

TEST_CASE("sgl report json carries the witness tuple") {
  PortLabeledGraph g = make_path(2);
  auto agents = team({{7, 0}, {3, 1}});
  RoundRobinScheduler sched;
  SglConfig cfg;
  cfg.est_max_n = 3;
  SglRunReport r = run_sgl(g, agents, sched, provider4(), cfg);
  std::string json = r.to_json();
  CHECK(json.find("polynomial_witness") != std::string::npos);
  CHECK(json.find("\"n\":2") != std::string::npos);
  CHECK(json.find("min_label_length") != std::string::npos);
}

TEST_CASE("bag merge is idempotent") {
  Bag a{{1, "x"}, {4, "y"}};
  Bag b = a;
  for (const auto& [label, value] : b) a.emplace(label, value);
  CHECK(a == b);
}
