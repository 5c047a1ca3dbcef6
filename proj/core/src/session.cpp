#include "condbayes/session.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "condbayes/error.hpp"
#include "json.hpp"

namespace condbayes {
namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json to_json(const Session& s) {
  json priors = json::array();
  for (const auto& [id, e] : s.priors)
    priors.push_back({{"id", id}, {"probability", e.probability}, {"support", e.supporting_timesteps}});
  json histories = json::object();
  for (const auto& [id, samples] : s.histories) {
    json h = json::array();
    for (const SurpriseSample& x : samples) h.push_back({x.iteration, x.surprise});
    histories[id] = std::move(h);
  }
  json processed = json::array();
  for (const ProcessedTrace& t : s.processed)
    processed.push_back({{"name", t.name}, {"records", t.records}});
  return {{"format", kFormatVersion},
          {"spec_hash", s.spec_hash},
          {"iteration", s.iteration},
          {"priors", std::move(priors)},
          {"histories", std::move(histories)},
          {"processed", std::move(processed)}};
}

Session from_json(const json& j) {
  if (j.at("format").get<int>() != kFormatVersion) throw SessionError("unsupported session format");
  Session s;
  s.spec_hash = j.at("spec_hash").get<std::string>();
  s.iteration = j.at("iteration").get<std::size_t>();
  for (const json& p : j.at("priors")) {
    PriorEntry e{p.at("id").get<std::string>(), p.at("probability").get<double>(),
                 p.at("support").get<std::uint64_t>()};
    if (!(e.probability >= 0.0 && e.probability <= 1.0))
      throw SessionError("prior outside [0, 1] for '" + e.predicate_id + "'");
    s.priors.set(std::move(e));
  }
  for (const auto& [id, h] : j.at("histories").items()) {
    auto& samples = s.histories[id];
    for (const json& x : h) samples.push_back({x.at(0).get<std::size_t>(), x.at(1).get<double>()});
  }
  for (const json& t : j.at("processed"))
    s.processed.push_back({t.at("name").get<std::string>(), t.at("records").get<std::uint64_t>()});
  if (s.iteration != s.processed.size())
    throw SessionError("iteration counter disagrees with the processed-trace log");
  return s;
}

}  // namespace

Session read_session(std::istream& in, std::string_view name) {
  try {
    return from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw SessionError("malformed session '" + std::string(name) + "': " + e.what());
  }
}

void write_session(const Session& session, std::ostream& out) {
  out << to_json(session).dump(1) << '\n';
}

Session load_session(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SessionError("cannot open session '" + path.string() + "'");
  return read_session(in, path.string());
}

void save_session(const Session& session, const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw SessionError("cannot write session '" + tmp.string() + "'");
    write_session(session, out);
    if (!out.flush()) throw SessionError("cannot write session '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

SessionLock::SessionLock(std::filesystem::path session) : lock_(std::move(session)) {
  lock_ += ".lock";
  // "x" makes creation fail if the file exists, atomically.
  std::FILE* f = std::fopen(lock_.c_str(), "wx");
  if (f == nullptr)
    throw SessionError("session is locked by another invocation: '" + lock_.string() + "'");
  std::fclose(f);
}

SessionLock::~SessionLock() {
  std::error_code ec;
  std::filesystem::remove(lock_, ec);
}

}  // namespace condbayes
