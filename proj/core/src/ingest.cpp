#include "debateforge/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "debateforge/default_data.hpp"
#include "debateforge/text_util.hpp"

namespace debateforge {

using nlohmann::json;

std::string make_record_id(const std::string& prefix, std::size_t serial) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu", serial);
  return prefix + buf;
}

IngestManifest IngestManifest::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw CorpusIoError("cannot open manifest: " + file.string());
  IngestManifest manifest;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fail = [&](const std::string& why) {
      throw CorpusIoError(file.string() + ":" + std::to_string(line_no) + ": " + why);
    };
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded()) fail("malformed JSON");
    if (!doc.is_object()) fail("manifest record must be a JSON object");
    ManifestEntry entry;
    if (doc.contains("path")) entry.path = doc["path"].get<std::string>();
    if (doc.contains("url")) entry.url = doc["url"].get<std::string>();
    if (doc.contains("date")) entry.date = doc["date"].get<std::string>();
    if (entry.path.empty() == entry.url.empty()) fail("entry needs exactly one of path/url");
    manifest.entries.push_back(std::move(entry));
  }
  if (manifest.entries.empty()) throw CorpusIoError("manifest has no entries: " + file.string());
  return manifest;
}

namespace {

// Minimal http URL split for httplib: ("http://host:port", "/path?query").
std::optional<std::pair<std::string, std::string>> split_http_url(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0) return std::nullopt;
  const std::size_t host_begin = scheme.size();
  const std::size_t path_begin = url.find('/', host_begin);
  if (path_begin == std::string::npos) return std::make_pair(url, std::string("/"));
  return std::make_pair(url.substr(0, path_begin), url.substr(path_begin));
}

std::string cache_name_for(const std::string& url) {
  std::string base = url.substr(url.find_last_of('/') + 1);
  std::string safe;
  for (char c : base) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_') {
      safe.push_back(c);
    }
  }
  if (safe.empty()) safe = "document";
  char hash[24];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a64(url)));
  return std::string(hash) + "_" + safe;
}

std::optional<std::string> read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string substitute_placeholders(std::string command, const std::string& in_path,
                                    const std::string& out_path) {
  auto replace_all = [](std::string& s, const std::string& from, const std::string& to) {
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
      s.replace(pos, from.size(), to);
    }
  };
  replace_all(command, "{in}", in_path);
  replace_all(command, "{out}", out_path);
  return command;
}

}  // namespace

FetchResult fetch_documents(const IngestManifest& manifest, const FetchOptions& options) {
  FetchResult result;
  auto last_request = std::chrono::steady_clock::time_point::min();

  for (const ManifestEntry& entry : manifest.entries) {
    if (!entry.path.empty()) {
      auto text = read_text_file(entry.path);
      if (!text) {
        result.failures.push_back({entry.path, 0, "cannot read local file"});
        continue;
      }
      result.files.push_back({entry.path, std::move(*text), "", entry.date});
      continue;
    }

    // Remote entry.
    if (options.cache_dir.empty()) {
      result.failures.push_back({entry.url, 0, "remote entry but no cache_dir configured"});
      continue;
    }
    std::error_code ec;
    std::filesystem::create_directories(options.cache_dir, ec);
    if (ec) {
      result.failures.push_back({entry.url, 0, "cannot create cache_dir: " + ec.message()});
      continue;
    }
    const std::filesystem::path raw_path = options.cache_dir / cache_name_for(entry.url);
    const std::filesystem::path text_path =
        options.extraction_command.empty() ? raw_path
                                           : std::filesystem::path(raw_path.string() + ".txt");

    bool have_raw = options.resume && std::filesystem::exists(raw_path, ec) &&
                    std::filesystem::file_size(raw_path, ec) > 0;
    if (!have_raw) {
      auto split = split_http_url(entry.url);
      if (!split) {
        result.failures.push_back(
            {entry.url, 0, "unsupported URL (only http:// is supported in this build)"});
        continue;
      }
      if (last_request != std::chrono::steady_clock::time_point::min()) {
        const auto elapsed = std::chrono::steady_clock::now() - last_request;
        if (elapsed < options.min_request_interval) {
          std::this_thread::sleep_for(options.min_request_interval - elapsed);
        }
      }
      last_request = std::chrono::steady_clock::now();
      httplib::Client client(split->first);
      client.set_follow_location(true);
      httplib::Result response = client.Get(split->second);
      if (!response || response->status < 200 || response->status >= 300) {
        const std::string status =
            response ? "HTTP " + std::to_string(response->status) : "connection failed";
        result.failures.push_back({entry.url, 0, "fetch failed: " + status});
        continue;
      }
      std::ofstream out(raw_path, std::ios::binary);
      out.write(response->body.data(),
                static_cast<std::streamsize>(response->body.size()));
      if (!out) {
        result.failures.push_back({entry.url, 0, "cannot write cache file " + raw_path.string()});
        continue;
      }
    }

    if (!options.extraction_command.empty()) {
      const bool have_text = options.resume && std::filesystem::exists(text_path, ec) &&
                             std::filesystem::file_size(text_path, ec) > 0;
      if (!have_text) {
        const std::string command =
            substitute_placeholders(options.extraction_command, raw_path.string(),
                                    text_path.string());
        const int status = std::system(command.c_str());
        if (status != 0) {
          result.failures.push_back(
              {entry.url, 0, "extraction command failed with status " + std::to_string(status)});
          continue;
        }
      }
    }

    auto text = read_text_file(text_path);
    if (!text) {
      result.failures.push_back({entry.url, 0, "cannot read fetched text " + text_path.string()});
      continue;
    }
    result.files.push_back({text_path, std::move(*text), entry.url, entry.date});
  }
  return result;
}

// ---------------------------------------------------------------------------
// Heading lexicon

namespace {

// Trailing plural 's' stripped for comparison, on tokens longer than 3.
std::string singular(const std::string& token) {
  if (token.size() > 3 && token.back() == 's') return token.substr(0, token.size() - 1);
  return token;
}

std::vector<std::string> heading_tokens(const std::string& text) {
  return whitespace_tokens(normalize_heading(text));
}

}  // namespace

HeadingLexicon HeadingLexicon::load(const std::filesystem::path& file) {
  auto text = read_text_file(file);
  if (!text) throw CorpusIoError("cannot open heading lexicon: " + file.string());
  return parse(*text);
}

HeadingLexicon HeadingLexicon::parse(const std::string& text) {
  HeadingLexicon lexicon;
  for (const std::string& raw : split_lines(text)) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    lexicon.add(line);
  }
  return lexicon;
}

const HeadingLexicon& HeadingLexicon::packaged() {
  static const HeadingLexicon kPackaged = parse(std::string(data::kDefaultHeadings));
  return kPackaged;
}

void HeadingLexicon::add(const std::string& canonical_name) {
  names_.push_back(trim(canonical_name));
  std::vector<std::string> tokens = heading_tokens(canonical_name);
  for (std::string& t : tokens) t = singular(t);
  tokens_.push_back(std::move(tokens));
}

std::optional<std::string> HeadingLexicon::match(const std::string& line) const {
  const std::string trimmed = trim(line);
  if (trimmed.empty() || trimmed.size() > 80) return std::nullopt;
  if (trimmed.find(':') != std::string::npos) return std::nullopt;
  if (!is_all_caps(trimmed)) return std::nullopt;

  std::vector<std::string> line_tokens = heading_tokens(trimmed);
  for (std::string& t : line_tokens) t = singular(t);
  if (line_tokens.empty()) return std::nullopt;

  std::size_t best = names_.size();
  std::size_t best_len = 0;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const std::vector<std::string>& entry = tokens_[i];
    if (entry.empty() || entry.size() <= best_len) continue;
    // Anchored ordered-subsequence test: headings lead with the type word,
    // and the anchor keeps short entries from firing on role labels whose
    // last word coincides (e.g. a "General" entry on "SECRETARY GENERAL").
    if (entry.front() != line_tokens.front()) continue;
    std::size_t pos = 1;
    bool ok = true;
    for (std::size_t w = 1; w < entry.size(); ++w) {
      while (pos < line_tokens.size() && line_tokens[pos] != entry[w]) ++pos;
      if (pos == line_tokens.size()) {
        ok = false;
        break;
      }
      ++pos;
    }
    if (ok) {
      best = i;
      best_len = entry.size();
    }
  }
  if (best == names_.size()) return std::nullopt;
  return names_[best];
}

// ---------------------------------------------------------------------------
// Header parsing

namespace {

const char* kWeekdays[] = {"monday", "tuesday", "wednesday", "thursday",
                           "friday", "saturday", "sunday"};

bool starts_with_weekday(const std::string& part) {
  const std::string lower = to_lower(part);
  for (const char* day : kWeekdays) {
    const std::size_t n = std::string(day).size();
    if (lower.rfind(day, 0) == 0 &&
        (lower.size() == n || lower[n] == ',' || std::isspace(static_cast<unsigned char>(lower[n])))) {
      return true;
    }
  }
  return false;
}

bool looks_like_indian_date(const std::string& part) {
  return to_lower(part).find("(saka") != std::string::npos;
}

std::vector<std::string> split_on_slash(const std::string& line) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (true) {
    std::size_t pos = line.find('/', begin);
    if (pos == std::string::npos) {
      parts.push_back(trim(line.substr(begin)));
      break;
    }
    parts.push_back(trim(line.substr(begin, pos - begin)));
    begin = pos + 1;
  }
  return parts;
}

}  // namespace

HeaderParse parse_session_header(const RawSessionFile& raw, const HeadingLexicon& lexicon) {
  HeaderParse result;
  const std::vector<std::string> lines = split_lines(raw.text);
  const std::string file = raw.source_path.string();

  // The header region ends at the first debate heading (or after 30 lines in
  // a file without any heading).
  std::size_t region_end = std::min<std::size_t>(lines.size(), 30);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lexicon.match(lines[i])) {
      region_end = i;
      break;
    }
  }

  Session& session = result.session;
  // Dates and the secretary-general label first; the house line is the first
  // all-caps line those passes did not claim.
  for (std::size_t i = 0; i < region_end; ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty()) continue;
    for (const std::string& part : split_on_slash(line)) {
      if (session.english_date.empty() && starts_with_weekday(part)) {
        session.english_date = part;
        result.consumed.insert(i + 1);
      }
      if (session.indian_date.empty() && looks_like_indian_date(part)) {
        session.indian_date = part;
        result.consumed.insert(i + 1);
      }
    }
    const std::size_t colon = line.find(':');
    if (colon != std::string::npos &&
        normalize_heading(line.substr(0, colon)) == "secretary general") {
      if (session.secretary_general.empty()) {
        session.secretary_general = trim(line.substr(colon + 1));
        result.consumed.insert(i + 1);
      }
    } else if (normalize_heading(line) == "secretary general" &&
               session.secretary_general.empty()) {
      result.consumed.insert(i + 1);
      for (std::size_t back = i; back-- > 0;) {
        const std::string prev = trim(lines[back]);
        if (prev.empty()) continue;
        if (is_all_caps(prev) && !result.consumed.count(back + 1)) {
          session.secretary_general = prev;
          result.consumed.insert(back + 1);
        }
        break;
      }
    }
  }
  for (std::size_t i = 0; i < region_end; ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty() || result.consumed.count(i + 1)) continue;
    if (is_all_caps(line) && line.find(':') == std::string::npos) {
      session.house_name = line;
      result.consumed.insert(i + 1);
      break;
    }
  }

  const bool nothing = session.english_date.empty() && session.indian_date.empty() &&
                       session.house_name.empty() && session.secretary_general.empty();
  if (nothing) {
    result.warnings.push_back({file, 0, "no recognizable header"});
  } else {
    if (session.english_date.empty())
      result.warnings.push_back({file, 0, "header: no english date found"});
    if (session.indian_date.empty())
      result.warnings.push_back({file, 0, "header: no indian (Saka) date found"});
    if (session.house_name.empty())
      result.warnings.push_back({file, 0, "header: no house name found"});
    if (session.secretary_general.empty())
      result.warnings.push_back({file, 0, "header: no secretary general found"});
  }
  return result;
}

// ---------------------------------------------------------------------------
// Debate segmentation

SegmentResult segment_debates(const RawSessionFile& raw, const HeadingLexicon& lexicon,
                              const std::set<std::size_t>& header_consumed) {
  SegmentResult result;
  const std::vector<std::string> lines = split_lines(raw.text);
  const std::string file = raw.source_path.string();

  std::size_t first_skipped = 0;
  bool seen_heading = false;

  std::size_t i = 0;
  while (i < lines.size()) {
    const std::size_t line_no = i + 1;
    auto heading = lexicon.match(lines[i]);
    if (!heading) {
      if (!seen_heading && !trim(lines[i]).empty() && !header_consumed.count(line_no)) {
        if (first_skipped == 0) first_skipped = line_no;
        ++result.lines_skipped;
      }
      ++i;
      continue;
    }
    seen_heading = true;
    DebateSegment segment;
    segment.type_name = *heading;
    segment.heading_line = line_no;

    // Optional topic: the first non-blank line after the heading.
    std::size_t j = i + 1;
    while (j < lines.size() && trim(lines[j]).empty()) ++j;
    std::size_t body_begin = i + 1;
    if (j < lines.size() && !lexicon.match(lines[j])) {
      const std::string candidate = trim(lines[j]);
      if (candidate.size() <= 120 && !split_speaker_line(candidate)) {
        segment.topic = candidate;
        body_begin = j + 1;
      }
    }

    // Body runs to the next heading or end of file.
    std::size_t end = body_begin;
    while (end < lines.size() && !lexicon.match(lines[end])) ++end;

    segment.body_start_line = body_begin + 1;
    std::string body;
    for (std::size_t k = body_begin; k < end; ++k) {
      if (k > body_begin) body.push_back('\n');
      body += lines[k];
    }
    segment.body_text = std::move(body);
    result.segments.push_back(std::move(segment));
    i = end;
  }

  if (result.lines_skipped > 0) {
    const std::string where = seen_heading ? "before the first heading" : "(no headings found)";
    result.warnings.push_back({file, first_skipped,
                               std::to_string(result.lines_skipped) +
                                   " non-blank lines skipped " + where});
  } else if (!seen_heading) {
    result.warnings.push_back({file, 0, "no debate headings found"});
  }
  return result;
}

// ---------------------------------------------------------------------------
// Speech turns

namespace {

// One word of a speaker prefix. Allows SHRI, Dr., A.K., (KANPUR),
// "Singh-Deo"; rejects digits and lowercase-led words.
bool is_speaker_word(const std::string& raw) {
  std::string w = raw;
  while (!w.empty() && (w.front() == '(')) w.erase(w.begin());
  while (!w.empty() && (w.back() == ')' || w.back() == ',' || w.back() == ';')) w.pop_back();
  if (w.empty()) return false;

  bool any_alpha = false;
  for (unsigned char c : w) {
    if (std::isdigit(c)) return false;
    if (std::isalpha(c) || c >= 0x80) {
      any_alpha = true;
      continue;
    }
    if (c == '.' || c == '\'' || c == '-') continue;
    return false;
  }
  if (!any_alpha) return false;

  // Each '-'-separated part must be all-caps or Title-case.
  std::size_t begin = 0;
  while (begin <= w.size()) {
    std::size_t dash = w.find('-', begin);
    const std::string part = w.substr(begin, dash == std::string::npos ? dash : dash - begin);
    if (!part.empty()) {
      bool first_alpha = true;
      for (unsigned char c : part) {
        if (!std::isalpha(c) && c < 0x80) continue;  // '.' and '\''
        if (first_alpha) {
          if (std::islower(c)) return false;  // must open upper-case
          first_alpha = false;
        }
      }
      // Title-case check: no upper-case letter after a lower-case one.
      bool seen_lower = false;
      for (unsigned char c : part) {
        if (std::islower(c)) seen_lower = true;
        if (std::isupper(c) && seen_lower) return false;
      }
    }
    if (dash == std::string::npos) break;
    begin = dash + 1;
  }
  return true;
}

bool has_two_letter_word(const std::string& prefix) {
  for (const std::string& token : whitespace_tokens(prefix)) {
    std::size_t letters = 0;
    for (unsigned char c : token) {
      if (std::isalpha(c) || c >= 0x80) ++letters;
    }
    if (letters >= 2) return true;
  }
  return false;
}

}  // namespace

std::optional<std::pair<std::string, std::string>> split_speaker_line(const std::string& line) {
  const std::size_t colon = line.find(':');
  if (colon == std::string::npos) return std::nullopt;
  const std::string prefix = trim(line.substr(0, colon));
  if (prefix.empty() || prefix.size() > 80) return std::nullopt;
  if (prefix.find('!') != std::string::npos || prefix.find('?') != std::string::npos) {
    return std::nullopt;
  }
  const std::vector<std::string> words = whitespace_tokens(prefix);
  if (words.empty()) return std::nullopt;
  for (const std::string& w : words) {
    if (!is_speaker_word(w)) return std::nullopt;
  }
  if (!has_two_letter_word(prefix)) return std::nullopt;
  return std::make_pair(prefix, trim(line.substr(colon + 1)));
}

TurnParse parse_speech_turns(const std::string& body_text, const std::string& file,
                             std::size_t line_offset) {
  TurnParse result;
  const std::vector<std::string> lines = split_lines(body_text);

  RawTurn current;
  bool open = false;
  auto flush = [&] {
    if (open) result.turns.push_back(std::move(current));
    current = RawTurn{};
    open = false;
  };
  auto append_text = [](RawTurn& turn, const std::string& text) {
    if (!turn.text.empty()) turn.text.push_back(' ');
    turn.text += text;
  };

  for (std::size_t k = 0; k < lines.size(); ++k) {
    const std::string line = trim(lines[k]);
    if (line.empty()) continue;
    const std::size_t absolute = line_offset + k;

    if (auto split = split_speaker_line(line)) {
      flush();
      current.speaker = split->first;
      current.text = split->second;
      current.line = absolute;
      open = true;
      continue;
    }
    if (!open) {
      current.speaker = "NARRATION";
      current.line = absolute;
      open = true;
      result.warnings.push_back(
          {file, absolute, "text before any speaker line attached to a NARRATION turn"});
    }
    append_text(current, line);
  }
  flush();
  return result;
}

// ---------------------------------------------------------------------------
// Member registry

namespace {

std::string strip_parentheticals(const std::string& name) {
  std::string out;
  int depth = 0;
  for (char c : name) {
    if (c == '(') {
      ++depth;
      continue;
    }
    if (c == ')') {
      if (depth > 0) --depth;
      continue;
    }
    if (depth == 0) out.push_back(c);
  }
  return out;
}

std::string collapse_spaces(const std::string& s) {
  std::vector<std::string> tokens = whitespace_tokens(s);
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace

void MemberRegistry::seed(const std::vector<Member>& existing) {
  for (const Member& m : existing) {
    members_.push_back(m);
    by_normalized_[normalize_person_name(m.name)] = members_.size() - 1;
    // Continue serials after the highest numeric suffix already present.
    if (m.id.size() > 1 && m.id[0] == 'm') {
      const std::size_t serial = std::strtoull(m.id.c_str() + 1, nullptr, 10);
      next_serial_ = std::max(next_serial_, serial + 1);
    }
  }
}

std::string MemberRegistry::resolve(const std::string& speaker_name) {
  const std::string display = collapse_spaces(strip_parentheticals(speaker_name));
  const std::string key = normalize_person_name(display);
  auto it = by_normalized_.find(key);
  if (it != by_normalized_.end()) return members_[it->second].id;
  Member member;
  member.id = make_record_id("m", next_serial_++);
  member.name = display;
  members_.push_back(member);
  by_normalized_[key] = members_.size() - 1;
  return members_.back().id;
}

// ---------------------------------------------------------------------------
// End-to-end ingest

ParseReport ingest(const IngestManifest& manifest, const std::filesystem::path& out_corpus_dir,
                   const IngestOptions& options) {
  const HeadingLexicon& headings =
      options.headings != nullptr ? *options.headings : HeadingLexicon::packaged();

  ParseReport report;
  FetchResult fetched = fetch_documents(manifest, options.fetch);
  for (IngestWarning& failure : fetched.failures) report.warnings.push_back(std::move(failure));

  Corpus corpus;
  MemberRegistry registry;
  std::unordered_map<std::string, std::string> type_ids;  // canonical name -> id
  std::size_t session_serial = 1;
  std::size_t debate_serial = 1;
  std::size_t type_serial = 1;

  for (const RawSessionFile& raw : fetched.files) {
    ++report.files_processed;
    const std::string file = raw.source_path.string();
    if (trim(raw.text).empty()) {
      report.warnings.push_back({file, 1, "file is empty"});
      continue;
    }

    HeaderParse header = parse_session_header(raw, headings);
    for (IngestWarning& w : header.warnings) report.warnings.push_back(std::move(w));
    Session session = std::move(header.session);
    session.id = make_record_id("s", session_serial++);
    if (session.english_date.empty()) session.english_date = raw.manifest_date;

    SegmentResult segmented = segment_debates(raw, headings, header.consumed);
    for (IngestWarning& w : segmented.warnings) report.warnings.push_back(std::move(w));
    report.lines_skipped += segmented.lines_skipped;

    for (DebateSegment& segment : segmented.segments) {
      auto type_it = type_ids.find(segment.type_name);
      if (type_it == type_ids.end()) {
        DebateType type;
        type.id = make_record_id("dt", type_serial++);
        type.name = segment.type_name;
        type_it = type_ids.emplace(segment.type_name, type.id).first;
        corpus.debate_types.push_back(std::move(type));
      }

      Debate debate;
      debate.id = make_record_id("d", debate_serial++);
      debate.topic = segment.topic;

      TurnParse turns = parse_speech_turns(segment.body_text, file, segment.body_start_line);
      for (IngestWarning& w : turns.warnings) report.warnings.push_back(std::move(w));
      for (RawTurn& turn : turns.turns) {
        if (turn.text.empty()) {
          report.warnings.push_back(
              {file, turn.line, "dropped empty speech turn for speaker '" + turn.speaker + "'"});
          continue;
        }
        SpeechTurn speech;
        speech.order_index = static_cast<int>(debate.speeches.size()) + 1;
        speech.member_id = registry.resolve(turn.speaker);
        speech.text = std::move(turn.text);
        debate.speeches.push_back(std::move(speech));
      }

      report.speeches_found += debate.speeches.size();
      ++report.debates_found;
      session.debates.emplace_back(type_it->second, debate.id);
      corpus.debates.push_back(std::move(debate));
    }
    corpus.sessions.push_back(std::move(session));
  }

  corpus.members = registry.members();
  save_corpus(corpus, out_corpus_dir);
  return report;
}

}  // namespace debateforge
