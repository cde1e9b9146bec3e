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

#include "infoload/event_model.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "infoload/config.h"
#include "infoload/error.h"

namespace infoload {
namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::vector<std::string> split_marks(std::string_view field) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= field.size()) {
    auto comma = field.find(',', start);
    if (comma == std::string_view::npos) comma = field.size();
    if (comma > start) out.emplace_back(field.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::optional<RawEvent> parse_event_line(std::string_view line,
                                         std::string& error) {
  const auto f = split_tabs(line);
  if (f.size() < 4) {
    error = "expected at least 4 tab-separated fields, got " +
            std::to_string(f.size());
    return std::nullopt;
  }
  RawEvent ev;
  try {
    ev.ts = parse_int(f[0], "timestamp");
  } catch (const InputError& e) {
    error = e.what();
    return std::nullopt;
  }
  ev.author = std::string(f[1]);
  ev.id = std::string(f[3]);
  if (ev.author.empty() || ev.id.empty()) {
    error = "empty author or event id";
    return std::nullopt;
  }
  if (f[2] == "T") {
    ev.kind = EventKind::kTweet;
    if (f.size() > 5) {
      error = "tweet line has " + std::to_string(f.size()) +
              " fields, expected 4 or 5";
      return std::nullopt;
    }
    if (f.size() == 5) ev.marks = split_marks(f[4]);
  } else if (f[2] == "R") {
    ev.kind = EventKind::kRetweet;
    if (f.size() < 6 || f.size() > 7) {
      error = "retweet line has " + std::to_string(f.size()) +
              " fields, expected 6 or 7";
      return std::nullopt;
    }
    ev.orig_id = std::string(f[4]);
    ev.orig_author = std::string(f[5]);
    if (ev.orig_id.empty() || ev.orig_author.empty()) {
      error = "empty original event id or author";
      return std::nullopt;
    }
    if (f.size() == 7) ev.marks = split_marks(f[6]);
  } else {
    error = "kind must be T or R, got '" + std::string(f[2]) + "'";
    return std::nullopt;
  }
  return ev;
}

template <class Map>
std::uint32_t intern(Map& index, std::vector<std::string>& names,
                     const std::string& s) {
  const auto [it, inserted] =
      index.try_emplace(s, static_cast<std::uint32_t>(names.size()));
  if (inserted) names.push_back(s);
  return it->second;
}

}  // namespace

bool event_id_less(std::string_view a, std::string_view b) {
  const bool da = all_digits(a);
  const bool db = all_digits(b);
  if (da != db) return da;
  if (da && a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

void EventLogBuilder::add(RawEvent event, std::size_t line) {
  pending_.push_back({std::move(event), line});
}

EventLog EventLogBuilder::build(std::vector<LineError>* rejects) && {
  std::sort(pending_.begin(), pending_.end(),
            [](const Pending& a, const Pending& b) {
              if (a.ev.ts != b.ev.ts) return a.ev.ts < b.ev.ts;
              return event_id_less(a.ev.id, b.ev.id);
            });

  std::unordered_map<std::string, std::size_t> first_line;
  first_line.reserve(pending_.size());
  for (const auto& p : pending_) {
    const auto [it, inserted] = first_line.try_emplace(p.ev.id, p.line);
    if (!inserted) {
      throw InputError("duplicate event id '" + p.ev.id + "' (lines " +
                       std::to_string(std::min(it->second, p.line)) + " and " +
                       std::to_string(std::max(it->second, p.line)) + ")");
    }
  }

  EventLog log;
  log.events_.reserve(pending_.size());
  log.ids_.reserve(pending_.size());
  log.id_index_.reserve(pending_.size());
  std::unordered_set<std::string> rejected;

  auto reject = [&](const Pending& p, std::string msg) {
    rejected.insert(p.ev.id);
    if (rejects) rejects->push_back({p.line, std::move(msg)});
  };

  for (auto& p : pending_) {
    RawEvent& raw = p.ev;
    Event ev;
    ev.ts = raw.ts;
    ev.kind = raw.kind;
    if (raw.kind == EventKind::kRetweet) {
      const auto src = log.id_index_.find(raw.orig_id);
      if (src == log.id_index_.end()) {
        if (rejected.count(raw.orig_id)) {
          reject(p, "retweet " + raw.id + " cites rejected event " +
                        raw.orig_id);
        } else if (first_line.count(raw.orig_id)) {
          reject(p, "retweet " + raw.id + " precedes its original " +
                        raw.orig_id);
        } else {
          reject(p, "retweet " + raw.id + " cites unknown event " +
                        raw.orig_id);
        }
        continue;
      }
      const Event& orig = log.events_[src->second];
      if (log.authors_[orig.author] != raw.orig_author) {
        reject(p, "retweet " + raw.id + " names author " + raw.orig_author +
                      " but event " + raw.orig_id + " is by " +
                      log.authors_[orig.author]);
        continue;
      }
      ev.orig = src->second;
    }
    ev.author = intern(log.author_index_, log.authors_, raw.author);
    if (ev.author == log.by_author_.size()) log.by_author_.emplace_back();
    for (const auto& m : raw.marks)
      ev.marks.push_back(intern(log.token_index_, log.tokens_, m));
    std::sort(ev.marks.begin(), ev.marks.end(),
              [&](TokenId a, TokenId b) {
                return log.tokens_[a] < log.tokens_[b];
              });
    ev.marks.erase(std::unique(ev.marks.begin(), ev.marks.end()),
                   ev.marks.end());

    const auto pos = static_cast<EventPos>(log.events_.size());
    log.by_author_[ev.author].push_back(pos);
    log.id_index_.emplace(raw.id, pos);
    log.ids_.push_back(std::move(raw.id));
    log.events_.push_back(std::move(ev));
  }
  if (rejects) {
    std::sort(rejects->begin(), rejects->end(),
              [](const LineError& a, const LineError& b) {
                return a.line < b.line;
              });
  }
  pending_.clear();
  return log;
}

std::optional<EventPos> EventLog::find(std::string_view id) const {
  const auto it = id_index_.find(std::string(id));
  if (it == id_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<AuthorId> EventLog::find_author(std::string_view name) const {
  const auto it = author_index_.find(std::string(name));
  if (it == author_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<TokenId> EventLog::find_token(std::string_view token) const {
  const auto it = token_index_.find(std::string(token));
  if (it == token_index_.end()) return std::nullopt;
  return it->second;
}

EventPos EventLog::root_of(EventPos p) const {
  while (events_[p].is_retweet()) p = events_[p].orig;
  return p;
}

TimeWindow EventLog::span() const {
  if (events_.empty()) return {0, 0};
  return {events_.front().ts, events_.back().ts};
}

void EventLog::write_tsv(std::ostream& out) const {
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const Event& e = events_[i];
    out << e.ts << '\t' << authors_[e.author] << '\t'
        << (e.is_retweet() ? 'R' : 'T') << '\t' << ids_[i];
    if (e.is_retweet())
      out << '\t' << ids_[e.orig] << '\t' << authors_[events_[e.orig].author];
    if (!e.marks.empty()) {
      out << '\t';
      for (std::size_t m = 0; m < e.marks.size(); ++m) {
        if (m) out << ',';
        out << tokens_[e.marks[m]];
      }
    }
    out << '\n';
  }
}

EventLogParse parse_event_log(std::istream& in) {
  EventLogBuilder builder;
  EventLogParse result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::string error;
    auto ev = parse_event_line(line, error);
    if (!ev) {
      result.rejects.push_back({lineno, std::move(error)});
      continue;
    }
    builder.add(std::move(*ev), lineno);
  }
  std::vector<LineError> invalid;
  result.log = std::move(builder).build(&invalid);
  result.rejects.insert(result.rejects.end(), invalid.begin(), invalid.end());
  std::sort(result.rejects.begin(), result.rejects.end(),
            [](const LineError& a, const LineError& b) {
              return a.line < b.line;
            });
  return result;
}

EventLogParse parse_event_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open event log: " + path);
  return parse_event_log(in);
}

std::vector<AuthorId> active_authors(const EventLog& log,
                                     std::int64_t before_ts,
                                     std::size_t min_events) {
  std::vector<AuthorId> out;
  for (AuthorId a = 0; a < log.author_count(); ++a) {
    std::size_t n = 0;
    for (EventPos p : log.events_by(a)) {
      if (log[p].ts >= before_ts) break;
      ++n;
    }
    if (n >= min_events) out.push_back(a);
  }
  return out;
}

std::optional<RetweetConvention> detect_retweet_convention(
    std::string_view text) {
  if (text.size() < 4) return std::nullopt;
  if (std::toupper(static_cast<unsigned char>(text[0])) != 'R' ||
      std::toupper(static_cast<unsigned char>(text[1])) != 'T' ||
      text[2] != ' ' || text[3] != '@')
    return std::nullopt;
  std::size_t i = 4;
  while (i < text.size() &&
         (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
    ++i;
  if (i == 4 || i >= text.size() || text[i] != ':') return std::nullopt;
  return RetweetConvention{"RT", std::string(text.substr(4, i - 4))};
}

SocialGraph SocialGraph::from_edges(
    std::size_t nodes, std::span<const std::pair<NodeId, NodeId>> edges) {
  std::vector<std::string> names(nodes);
  for (std::size_t i = 0; i < nodes; ++i) names[i] = std::to_string(i);
  return from_named_edges(std::move(names), edges);
}

SocialGraph SocialGraph::from_named_edges(
    std::vector<std::string> names,
    std::span<const std::pair<NodeId, NodeId>> edges) {
  SocialGraph g;
  g.names_ = std::move(names);
  g.index_.reserve(g.names_.size());
  for (NodeId i = 0; i < g.names_.size(); ++i) {
    if (!g.index_.emplace(g.names_[i], i).second)
      throw InputError("duplicate node name: " + g.names_[i]);
  }
  g.build(edges);
  return g;
}

void SocialGraph::build(std::span<const std::pair<NodeId, NodeId>> edges) {
  const std::size_t n = names_.size();
  std::vector<std::pair<NodeId, NodeId>> sorted(edges.begin(), edges.end());
  for (const auto& [u, v] : sorted) {
    if (u >= n || v >= n) throw InputError("edge endpoint out of range");
    if (u == v) throw InputError("self-loop on node " + names_[u]);
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  followee_off_.assign(n + 1, 0);
  follower_off_.assign(n + 1, 0);
  for (const auto& [u, v] : sorted) {
    ++followee_off_[u + 1];
    ++follower_off_[v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    followee_off_[i + 1] += followee_off_[i];
    follower_off_[i + 1] += follower_off_[i];
  }
  followee_list_.resize(sorted.size());
  follower_list_.resize(sorted.size());
  std::vector<std::size_t> fill(follower_off_.begin(), follower_off_.end() - 1);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    followee_list_[i] = sorted[i].second;
    follower_list_[fill[sorted[i].second]++] = sorted[i].first;
  }
  // Sorted edges visit followers in ascending order, so each follower list
  // is already ascending.
}

std::optional<NodeId> SocialGraph::find(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeId SocialGraph::require(std::string_view name) const {
  if (auto n = find(name)) return *n;
  throw UnknownIdError("user", std::string(name));
}

bool SocialGraph::follows(NodeId follower, NodeId followee) const {
  const auto f = followees(follower);
  return std::binary_search(f.begin(), f.end(), followee);
}

void SocialGraph::write_tsv(std::ostream& out) const {
  for (NodeId u = 0; u < node_count(); ++u) {
    const auto f = followees(u);
    if (f.empty() && followers(u).empty()) {
      out << names_[u] << '\n';
      continue;
    }
    for (NodeId v : f) out << names_[u] << '\t' << names_[v] << '\n';
  }
}

GraphParse parse_graph(std::istream& in) {
  GraphParse result;
  std::vector<std::string> names;
  std::unordered_map<std::string, NodeId> index;
  std::vector<std::pair<NodeId, NodeId>> edges;
  auto node = [&](std::string_view s) {
    return intern(index, names, std::string(s));
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto f = split_tabs(line);
    if (f.size() == 1 && !f[0].empty()) {
      node(f[0]);
      continue;
    }
    if (f.size() != 2 || f[0].empty() || f[1].empty()) {
      result.rejects.push_back(
          {lineno, "expected 'follower<TAB>followee' or a single node name"});
      continue;
    }
    if (f[0] == f[1]) {
      result.rejects.push_back(
          {lineno, "self-loop on " + std::string(f[0])});
      continue;
    }
    const NodeId u = node(f[0]);
    const NodeId v = node(f[1]);
    edges.emplace_back(u, v);
  }
  const std::size_t raw = edges.size();
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  result.duplicate_edges = raw - edges.size();
  result.graph = SocialGraph::from_named_edges(std::move(names), edges);
  return result;
}

GraphParse parse_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph: " + path);
  return parse_graph(in);
}

FeedIndex::FeedIndex(const EventLog& log, const SocialGraph& graph)
    : log_(&log),
      graph_(&graph),
      author_of_node_(graph.node_count(), kNone),
      node_of_author_(log.author_count(), kNone) {
  for (AuthorId a = 0; a < log.author_count(); ++a) {
    if (auto n = graph.find(log.author_name(a))) {
      node_of_author_[a] = *n;
      author_of_node_[*n] = a;
    }
  }
}

namespace {

std::span<const EventPos> window_slice(const EventLog& log,
                                       std::span<const EventPos> positions,
                                       const TimeWindow& window) {
  const auto lo = std::lower_bound(
      positions.begin(), positions.end(), window.start,
      [&](EventPos p, std::int64_t t) { return log[p].ts < t; });
  const auto hi = std::upper_bound(
      lo, positions.end(), window.end,
      [&](std::int64_t t, EventPos p) { return t < log[p].ts; });
  return {lo, hi};
}

}  // namespace

InFlowStream in_flow_stream(const FeedIndex& feed, NodeId user,
                            const TimeWindow& window,
                            const InFlowOptions& options) {
  const EventLog& log = feed.log();
  InFlowStream s;
  s.user = user;
  for (NodeId v : feed.graph().followees(user)) {
    const AuthorId a = feed.author_of(v);
    if (a == kNone) continue;
    for (EventPos p : window_slice(log, log.events_by(a), window)) {
      if (!options.include_retweets && log[p].is_retweet()) continue;
      s.events.push_back(p);
    }
  }
  std::sort(s.events.begin(), s.events.end());
  return s;
}

InFlowStream in_flow_stream(std::string_view user, const EventLog& log,
                            const SocialGraph& graph, const TimeWindow& window,
                            const InFlowOptions& options) {
  const NodeId n = graph.require(user);
  return in_flow_stream(FeedIndex(log, graph), n, window, options);
}

std::span<const EventPos> own_events(const FeedIndex& feed, NodeId user,
                                     const TimeWindow& window) {
  const AuthorId a = feed.author_of(user);
  if (a == kNone) return {};
  return window_slice(feed.log(), feed.log().events_by(a), window);
}

}  // namespace infoload
