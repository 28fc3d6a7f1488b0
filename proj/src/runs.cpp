#include "rvsim/runs.hpp"

#include <sstream>

#include <json.hpp>

#include "rvsim/prng.hpp"
#include "rvsim/rendezvous.hpp"

namespace rvsim {

std::shared_ptr<const UxsProvider> RunSetup::make_provider() const {
  if (provider_kind == "toy:constant1") return toy_length_function(ToyShape::Constant1);
  if (provider_kind == "toy:linear") return toy_length_function(ToyShape::Linear);
  if (provider_kind == "certified") return CertifiedProvider::parse(provider_manifest);
  throw std::invalid_argument("unknown provider kind: " + provider_kind);
}

std::string RunSetup::header_json() const {
  nlohmann::ordered_json j;
  j["format"] = "rvsim-trace-1";
  j["protocol"] = protocol;
  j["graph"] = graph_text;
  nlohmann::ordered_json ags = nlohmann::ordered_json::array();
  for (const SglAgentConfig& a : agents) {
    nlohmann::ordered_json e;
    e["label"] = a.label;
    e["start"] = a.start;
    e["value"] = a.value;
    ags.push_back(std::move(e));
  }
  j["agents"] = std::move(ags);
  j["scheduler"] = scheduler;
  j["seed"] = seed;
  j["engine"] = {{"event_cap", engine.event_cap},
                 {"move_budget", engine.move_budget},
                 {"wake_budget", engine.wake_budget},
                 {"stall_budget", engine.stall_budget},
                 {"fairness_budget", engine.fairness_budget}};
  j["provider"] = provider_kind;
  j["provider_manifest"] = provider_manifest;
  j["est_max_n"] = est_max_n;
  j["phase2_oracle_cutoff"] = phase2_oracle_cutoff;
  j["tunnel_m"] = tunnel_m;
  j["hashes"] = {{"graph", hex16(fnv1a64(graph_text))},
                 {"uxs", hex16(fnv1a64(provider_manifest))}};
  return j.dump();
}

RunSetup RunSetup::from_header_json(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line);
  if (j.value("format", "") != "rvsim-trace-1")
    throw std::runtime_error("unrecognized trace format");
  RunSetup s;
  s.protocol = j.at("protocol").get<std::string>();
  s.graph_text = j.at("graph").get<std::string>();
  for (const auto& e : j.at("agents")) {
    SglAgentConfig a;
    a.label = e.at("label").get<std::uint64_t>();
    a.start = e.at("start").get<std::int32_t>();
    a.value = e.at("value").get<std::string>();
    s.agents.push_back(std::move(a));
  }
  s.scheduler = j.at("scheduler").get<std::string>();
  s.seed = j.at("seed").get<std::uint64_t>();
  const auto& eng = j.at("engine");
  s.engine.event_cap = eng.at("event_cap").get<std::uint64_t>();
  s.engine.move_budget = eng.at("move_budget").get<std::int32_t>();
  s.engine.wake_budget = eng.at("wake_budget").get<std::int32_t>();
  s.engine.stall_budget = eng.at("stall_budget").get<std::int32_t>();
  s.engine.fairness_budget = eng.at("fairness_budget").get<std::int32_t>();
  s.provider_kind = j.at("provider").get<std::string>();
  s.provider_manifest = j.at("provider_manifest").get<std::string>();
  s.est_max_n = j.at("est_max_n").get<std::int32_t>();
  s.phase2_oracle_cutoff = j.at("phase2_oracle_cutoff").get<bool>();
  s.tunnel_m = j.at("tunnel_m").get<std::uint64_t>();
  return s;
}

RunArtifacts execute_run(const RunSetup& setup,
                         const std::vector<Decision>* replay_decisions) {
  PortLabeledGraph graph = PortLabeledGraph::parse(setup.graph_text);
  auto provider = setup.make_provider();
  EngineConfig ecfg = setup.engine;
  ecfg.record_trace = true;

  std::unique_ptr<Scheduler> sched;
  if (replay_decisions) {
    sched = std::make_unique<ReplayScheduler>(*replay_decisions);
  } else {
    sched = make_scheduler(setup.scheduler, setup.seed);
  }

  RunArtifacts art;
  std::vector<std::string> lines;
  if (setup.protocol == "rendezvous") {
    if (setup.agents.size() != 2)
      throw std::invalid_argument("rendezvous runs take two agents");
    RendezvousOutcome out = run_rendezvous(
        graph, setup.agents[0].label, setup.agents[1].label, setup.agents[0].start,
        setup.agents[1].start, *sched, provider, ecfg.event_cap, nullptr, &ecfg);
    art.met = out.met;
    art.end = out.end;
    art.events = out.events;
    art.total_cost = out.total_cost;
    lines = std::move(out.trace_lines);
  } else if (setup.protocol == "sgl") {
    SglConfig cfg;
    cfg.est_max_n = setup.est_max_n;
    cfg.event_cap = ecfg.event_cap;
    cfg.phase2_oracle_cutoff = setup.phase2_oracle_cutoff;
    cfg.engine = ecfg;
    SglRunReport rep = run_sgl(graph, setup.agents, *sched, provider, cfg);
    art.all_output = rep.all_output;
    art.end = rep.end;
    art.events = rep.events;
    art.total_cost = rep.total_cost;
    lines = std::move(rep.trace_lines);
  } else if (setup.protocol == "tunnel") {
    if (setup.agents.size() != 2)
      throw std::invalid_argument("tunnel runs take two agents (b then a)");
    bool met = tunnel_scenario(graph, setup.tunnel_m, setup.agents[0].start,
                               setup.agents[1].start, *sched, provider,
                               ecfg.event_cap, &ecfg,
                               /*scripted_wakes=*/replay_decisions == nullptr, &lines);
    art.met = met;
  } else {
    throw std::invalid_argument("unknown protocol: " + setup.protocol);
  }

  std::ostringstream trace;
  trace << setup.header_json() << "\n";
  for (const std::string& l : lines) trace << l << "\n";
  art.trace = trace.str();
  return art;
}

std::vector<Decision> parse_trace_decisions(const std::string& trace) {
  std::vector<Decision> decisions;
  std::istringstream in(trace);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      continue;
    }
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    std::string kind = j.value("kind", "");
    if (kind == "wake") {
      decisions.push_back(Decision::wake(j.at("agent").get<std::int32_t>()));
    } else if (kind == "move") {
      decisions.push_back(Decision::move(j.at("agent").get<std::int32_t>(),
                                         Fraction::parse(j.at("to").get<std::string>())));
    }
    // transition/output lines carry no decision
  }
  return decisions;
}

bool replay_trace(const std::string& trace, std::string* regenerated) {
  auto newline = trace.find('\n');
  if (newline == std::string::npos) throw std::runtime_error("trace has no header");
  RunSetup setup = RunSetup::from_header_json(trace.substr(0, newline));
  std::vector<Decision> decisions = parse_trace_decisions(trace);
  RunArtifacts art = execute_run(setup, &decisions);
  if (regenerated) *regenerated = art.trace;
  return art.trace == trace;
}

}  // namespace rvsim
