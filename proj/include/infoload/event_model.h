// Copyright 2026 The infoload Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INFOLOAD_EVENT_MODEL_H_
#define INFOLOAD_EVENT_MODEL_H_

// Event logs, the follow graph, and per-user in-flow streams.
//
// Event TSV (one event per line, tab-separated):
//   ts  author  T  event_id  [marks]
//   ts  author  R  event_id  orig_event_id  orig_author  [marks]
// marks is a comma-separated list of opaque contagion tokens.
//
// Graph TSV: `follower \t followee` per line; a line holding a single field
// declares a node without edges. Edge (u, v) means u follows v, so
// information flows v -> u.

#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace infoload {

using NodeId = std::uint32_t;
using AuthorId = std::uint32_t;
using TokenId = std::uint32_t;
// Position of an event in the log's total order.
using EventPos = std::uint32_t;

inline constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

enum class EventKind : std::uint8_t { kTweet, kRetweet };

struct Event {
  std::int64_t ts = 0;
  AuthorId author = kNone;
  EventKind kind = EventKind::kTweet;
  // Immediate source of a retweet; kNone for tweets.
  EventPos orig = kNone;
  // Sorted by token text.
  std::vector<TokenId> marks;

  bool is_retweet() const { return kind == EventKind::kRetweet; }
};

// Closed interval [start, end] in seconds.
struct TimeWindow {
  std::int64_t start = std::numeric_limits<std::int64_t>::min();
  std::int64_t end = std::numeric_limits<std::int64_t>::max();

  bool contains(std::int64_t ts) const { return ts >= start && ts <= end; }
  double hours() const { return static_cast<double>(end - start) / 3600.0; }
};

// Strict total order on event ids: all-digit ids compare numerically and
// precede other ids, which compare lexicographically.
bool event_id_less(std::string_view a, std::string_view b);

// One input line before validation.
struct RawEvent {
  std::int64_t ts = 0;
  std::string author;
  EventKind kind = EventKind::kTweet;
  std::string id;
  std::string orig_id;
  std::string orig_author;
  std::vector<std::string> marks;
};

struct LineError {
  std::size_t line = 0;
  std::string message;
};

class EventLog;

// Collects raw events and produces a validated, sorted EventLog.
class EventLogBuilder {
 public:
  void add(RawEvent event, std::size_t line = 0);
  std::size_t size() const { return pending_.size(); }

  // Throws InputError on duplicate event ids. Retweets whose source is
  // unknown, attributed to another author, or not earlier in the total order
  // are dropped and reported in `rejects`.
  EventLog build(std::vector<LineError>* rejects = nullptr) &&;

 private:
  struct Pending {
    RawEvent ev;
    std::size_t line;
  };
  std::vector<Pending> pending_;
};

// Immutable, sorted by (ts, event id). Safe to share across threads.
class EventLog {
 public:
  EventLog() = default;

  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const Event& operator[](EventPos p) const { return events_[p]; }
  std::span<const Event> events() const { return events_; }

  const std::string& id(EventPos p) const { return ids_[p]; }
  std::optional<EventPos> find(std::string_view id) const;

  std::size_t author_count() const { return authors_.size(); }
  const std::string& author_name(AuthorId a) const { return authors_[a]; }
  std::optional<AuthorId> find_author(std::string_view name) const;
  // Positions of the author's events, ascending.
  std::span<const EventPos> events_by(AuthorId a) const {
    return by_author_[a];
  }

  std::size_t token_count() const { return tokens_.size(); }
  const std::string& token_name(TokenId t) const { return tokens_[t]; }
  std::optional<TokenId> find_token(std::string_view token) const;

  // Follows retweet sources back to the original tweet.
  EventPos root_of(EventPos p) const;

  // [first ts, last ts]; the default window for analyses.
  TimeWindow span() const;

  // Canonical TSV. Parsing this text reproduces it byte for byte.
  void write_tsv(std::ostream& out) const;

 private:
  friend class EventLogBuilder;

  std::vector<Event> events_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, EventPos> id_index_;
  std::vector<std::string> authors_;
  std::unordered_map<std::string, AuthorId> author_index_;
  std::vector<std::vector<EventPos>> by_author_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> token_index_;
};

struct EventLogParse {
  EventLog log;
  std::vector<LineError> rejects;
};

// Malformed and invalid lines are reported, not fatal; duplicate event ids
// throw InputError.
EventLogParse parse_event_log(std::istream& in);
EventLogParse parse_event_log_file(const std::string& path);

// Users with at least `min_events` events strictly before `before_ts`.
std::vector<AuthorId> active_authors(const EventLog& log,
                                     std::int64_t before_ts,
                                     std::size_t min_events = 1);

// Retweet convention detector: text beginning with "RT @handle:" where RT is
// case-insensitive and handle is [A-Za-z0-9_]+.
struct RetweetConvention {
  std::string token;
  std::string cited_user;
  bool operator==(const RetweetConvention&) const = default;
};
std::optional<RetweetConvention> detect_retweet_convention(
    std::string_view text);

// Static directed follow relation. Immutable after construction.
class SocialGraph {
 public:
  SocialGraph() = default;
  // Nodes are named by their decimal index.
  static SocialGraph from_edges(
      std::size_t nodes, std::span<const std::pair<NodeId, NodeId>> edges);
  static SocialGraph from_named_edges(
      std::vector<std::string> names,
      std::span<const std::pair<NodeId, NodeId>> edges);

  std::size_t node_count() const { return names_.size(); }
  std::size_t edge_count() const { return followee_list_.size(); }
  const std::string& name(NodeId n) const { return names_[n]; }
  std::optional<NodeId> find(std::string_view name) const;
  // Throws UnknownIdError.
  NodeId require(std::string_view name) const;

  // Users that n follows (sources of n's in-flow), ascending.
  std::span<const NodeId> followees(NodeId n) const {
    return {followee_list_.data() + followee_off_[n],
            followee_off_[n + 1] - followee_off_[n]};
  }
  // Users that follow n (receivers of n's posts), ascending.
  std::span<const NodeId> followers(NodeId n) const {
    return {follower_list_.data() + follower_off_[n],
            follower_off_[n + 1] - follower_off_[n]};
  }
  // Index of the edge n -> followees(n)[i] is followee_edge_base(n) + i.
  std::size_t followee_edge_base(NodeId n) const { return followee_off_[n]; }
  bool follows(NodeId follower, NodeId followee) const;

  void write_tsv(std::ostream& out) const;

 private:
  void build(std::span<const std::pair<NodeId, NodeId>> edges);

  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::size_t> followee_off_{0};
  std::vector<NodeId> followee_list_;
  std::vector<std::size_t> follower_off_{0};
  std::vector<NodeId> follower_list_;
};

struct GraphParse {
  SocialGraph graph;
  std::vector<LineError> rejects;
  std::size_t duplicate_edges = 0;
};

GraphParse parse_graph(std::istream& in);
GraphParse parse_graph_file(const std::string& path);

// Joins a log and a graph by user name.
class FeedIndex {
 public:
  FeedIndex(const EventLog& log, const SocialGraph& graph);

  const EventLog& log() const { return *log_; }
  const SocialGraph& graph() const { return *graph_; }
  AuthorId author_of(NodeId n) const { return author_of_node_[n]; }
  NodeId node_of(AuthorId a) const { return node_of_author_[a]; }

 private:
  const EventLog* log_;
  const SocialGraph* graph_;
  std::vector<AuthorId> author_of_node_;
  std::vector<NodeId> node_of_author_;
};

struct InFlowOptions {
  // Retweets posted by followees are part of the feed.
  bool include_retweets = true;
};

struct InFlowStream {
  NodeId user = kNone;
  // Ascending log positions.
  std::vector<EventPos> events;
};

InFlowStream in_flow_stream(const FeedIndex& feed, NodeId user,
                            const TimeWindow& window,
                            const InFlowOptions& options = {});
// Convenience form; throws UnknownIdError for a user not in the graph.
InFlowStream in_flow_stream(std::string_view user, const EventLog& log,
                            const SocialGraph& graph, const TimeWindow& window,
                            const InFlowOptions& options = {});

// The user's own events inside the window, ascending.
std::span<const EventPos> own_events(const FeedIndex& feed, NodeId user,
                                     const TimeWindow& window);

}  // namespace infoload

#endif  // INFOLOAD_EVENT_MODEL_H_
