#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "condbayes/prior_store.hpp"
#include "condbayes/ranking.hpp"

namespace condbayes {

struct ProcessedTrace {
  std::string name;
  std::uint64_t records = 0;

  bool operator==(const ProcessedTrace&) const = default;
};

// Everything needed to continue refining beliefs in a later invocation.
// iteration always equals processed.size().
struct Session {
  std::string spec_hash;
  PriorStore priors;
  std::map<std::string, std::vector<SurpriseSample>> histories;  // by invariant id
  std::size_t iteration = 0;
  std::vector<ProcessedTrace> processed;

  bool operator==(const Session&) const = default;
};

// JSON. Reading checks the iteration/processed invariant and throws
// SessionError on anything malformed.
Session read_session(std::istream& in, std::string_view name = "<stream>");
void write_session(const Session& session, std::ostream& out);
Session load_session(const std::filesystem::path& path);
// Writes to a sibling temporary and renames it over `path`.
void save_session(const Session& session, const std::filesystem::path& path);

// Exclusive claim on a session path through "<path>.lock". Throws
// SessionError when the lock already exists.
class SessionLock {
 public:
  explicit SessionLock(std::filesystem::path session);
  ~SessionLock();
  SessionLock(const SessionLock&) = delete;
  SessionLock& operator=(const SessionLock&) = delete;

  const std::filesystem::path& path() const noexcept { return lock_; }

 private:
  std::filesystem::path lock_;
};

}  // namespace condbayes
