#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "debateforge/corpus.hpp"

namespace debateforge {

// One transcript, already extracted to text.
struct RawSessionFile {
  std::filesystem::path source_path;
  std::string text;
  std::string source_url;    // empty for local files
  std::string manifest_date; // expected debate date from the manifest entry
};

// Exactly one of path/url is set.
struct ManifestEntry {
  std::string path;
  std::string url;
  std::string date;

  bool operator==(const ManifestEntry&) const = default;
};

struct IngestManifest {
  std::vector<ManifestEntry> entries;

  // JSON Lines of {path|url, date}. Throws CorpusIoError with file:line
  // context on malformed records or entries with neither/both locators.
  static IngestManifest load(const std::filesystem::path& file);
};

struct IngestWarning {
  std::string file;
  std::size_t line = 0;  // 1-based; 0 when the warning is not line-scoped
  std::string reason;

  bool operator==(const IngestWarning&) const = default;
};

struct ParseReport {
  std::size_t files_processed = 0;
  std::size_t debates_found = 0;
  std::size_t speeches_found = 0;
  std::size_t lines_skipped = 0;
  std::vector<IngestWarning> warnings;
};

struct FetchOptions {
  // Where remote documents (and their extracted text) land. Required when the
  // manifest has remote entries.
  std::filesystem::path cache_dir;
  // External binary-to-text command applied to remote downloads, with {in}
  // and {out} placeholders, run through the shell (e.g. "pdftotext {in}
  // {out}"). Empty means the downloaded body is already text.
  std::string extraction_command;
  // Polite spacing between consecutive network requests.
  std::chrono::milliseconds min_request_interval{2000};
  // Skip downloads whose cache file already exists and is non-empty.
  bool resume = true;
};

struct FetchResult {
  std::vector<RawSessionFile> files;     // manifest order, failures omitted
  std::vector<IngestWarning> failures;   // one per failed entry
};

// Materializes every manifest entry: local paths are read directly (no
// network, no extraction); remote entries are fetched over HTTP with the
// configured rate limit, cached under cache_dir, and run through the
// extraction command when one is set. Per-entry failures never abort the
// batch.
FetchResult fetch_documents(const IngestManifest& manifest, const FetchOptions& options);

// Canonical debate-type names matched fuzzily against all-caps heading lines.
class HeadingLexicon {
 public:
  // One canonical name per line; '#' lines are comments. Throws CorpusIoError
  // when unreadable.
  static HeadingLexicon load(const std::filesystem::path& file);
  static HeadingLexicon parse(const std::string& text);
  static const HeadingLexicon& packaged();

  void add(const std::string& canonical_name);

  // The canonical type name when the line is a heading: all-caps, no colon,
  // <= 80 chars, the entry's first token equals the line's first normalized
  // token, and the remaining entry tokens appear in order among the line's
  // remaining tokens (trailing plural 's' stripped on both sides for tokens
  // longer than 3). The entry with the most tokens wins; ties go to lexicon
  // order.
  std::optional<std::string> match(const std::string& line) const;

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> tokens_;
};

struct HeaderParse {
  Session session;               // dates/house/secretary filled; ids empty
  std::set<std::size_t> consumed;  // 1-based line numbers recognized as header
  std::vector<IngestWarning> warnings;
};

// Extracts english_date (weekday-prefixed line), indian_date (line containing
// "(Saka)"), house_name (first all-caps non-date line), and
// secretary_general (all-caps line preceding a "Secretary General" label, or
// a "Secretary General: NAME" line) from the region before the first debate
// heading. Missing fields stay empty with a warning; nothing is fatal.
HeaderParse parse_session_header(const RawSessionFile& raw, const HeadingLexicon& lexicon);

struct DebateSegment {
  std::string type_name;         // canonical debate-type name
  std::string topic;             // may be empty
  std::string body_text;         // raw lines, blank lines preserved
  std::size_t heading_line = 0;  // 1-based
  std::size_t body_start_line = 0;  // 1-based line number of body_text's first line
};

struct SegmentResult {
  std::vector<DebateSegment> segments;
  std::size_t lines_skipped = 0;
  std::vector<IngestWarning> warnings;
};

// Partitions the file at heading lines. The topic is the first non-blank line
// after a heading when it is not itself a heading, not a speaker line, and
// <= 120 chars. Non-blank lines before the first heading that were not
// consumed by the header parse are skipped and counted.
SegmentResult segment_debates(const RawSessionFile& raw, const HeadingLexicon& lexicon,
                              const std::set<std::size_t>& header_consumed = {});

// Speaker-line split: the prefix before the first colon must be <= 80 chars,
// contain no '!', '?' or digits, and consist of all-caps, Title-case,
// initial, or parenthesized words (honorific periods allowed), at least one
// word with two letters. Returns (speaker, rest-of-line) or nullopt.
std::optional<std::pair<std::string, std::string>> split_speaker_line(const std::string& line);

struct RawTurn {
  std::string speaker;
  std::string text;
  std::size_t line = 0;  // file-absolute 1-based line the turn starts on

  bool operator==(const RawTurn&) const = default;
};

struct TurnParse {
  std::vector<RawTurn> turns;
  std::vector<IngestWarning> warnings;
};

// A new turn starts at each speaker line; other non-blank lines are appended
// to the current turn, joined by single spaces (transcript lines are
// hard-wrapped mid-sentence). Text before any speaker line becomes a
// synthetic "NARRATION" turn with a warning. line_offset is the file-absolute
// 1-based line number of body_text's first line, so warning and turn line
// numbers stay file-absolute.
TurnParse parse_speech_turns(const std::string& body_text, const std::string& file = "",
                             std::size_t line_offset = 1);

// Normalized-name member lookup that creates members on first sight.
// Parenthesized groups (constituencies) are stripped before normalization.
class MemberRegistry {
 public:
  // Keeps existing ids; new members continue after the highest serial.
  void seed(const std::vector<Member>& existing);

  // Id for the speaker, creating a new member (empty house/party) on miss.
  // Idempotent per normalized name.
  std::string resolve(const std::string& speaker_name);

  const std::vector<Member>& members() const { return members_; }

 private:
  std::vector<Member> members_;
  std::unordered_map<std::string, std::size_t> by_normalized_;
  std::size_t next_serial_ = 1;
};

struct IngestOptions {
  FetchOptions fetch;
  // Defaults to HeadingLexicon::packaged() when null.
  const HeadingLexicon* headings = nullptr;
};

// End-to-end ingest: fetch, parse headers, segment debates, split turns,
// resolve members, and write the corpus to out_corpus_dir. Only output I/O
// failures throw; all parse degradation lands in the report. Deterministic:
// identical inputs produce byte-identical corpus files.
ParseReport ingest(const IngestManifest& manifest, const std::filesystem::path& out_corpus_dir,
                   const IngestOptions& options = {});

// "prefix + zero-padded 6-digit serial" record ids (m000001, d000042, ...).
std::string make_record_id(const std::string& prefix, std::size_t serial);

}  // namespace debateforge
