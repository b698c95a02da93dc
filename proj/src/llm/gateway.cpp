#include "tabqa/llm/gateway.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <fstream>

#include <json.hpp>

#include "tabqa/error.hpp"

namespace tabqa::llm {

using nlohmann::json;

void ChatRequest::validate() const {
  if (messages.empty()) throw Error(ErrorKind::Config, "chat request has no messages");
  if (temperature < 0) throw Error(ErrorKind::Config, "temperature must be >= 0");
  if (max_tokens <= 0) throw Error(ErrorKind::Config, "max_tokens must be positive");
}

ChatRequest user_request(std::string model, std::string prompt) {
  ChatRequest r;
  r.model = std::move(model);
  r.messages.push_back({"user", std::move(prompt)});
  return r;
}

std::string fingerprint(const ChatRequest& request) {
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  std::string canonical = json{{"model", request.model}, {"messages", messages}}.dump();

  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(canonical.data(), canonical.size(), digest, &length, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

namespace {

json response_to_json(const ChatResponse& r) {
  return {{"content", r.content}, {"finish_reason", r.finish_reason}, {"latency_ms", r.latency_ms}};
}

ChatResponse response_from_json(const json& j) {
  ChatResponse r;
  r.content = j.at("content").get<std::string>();
  r.finish_reason = j.value("finish_reason", "stop");
  r.latency_ms = j.value("latency_ms", std::uint64_t{0});
  return r;
}

}  // namespace

// --- replay -----------------------------------------------------------------

struct ReplayGateway::Slot {
  std::vector<ChatResponse> responses;
  std::atomic<std::size_t> next{0};
};

ReplayGateway::ReplayGateway(ReplayGateway&&) noexcept = default;
ReplayGateway::~ReplayGateway() = default;

ReplayGateway ReplayGateway::load(const std::filesystem::path& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::UnreadableFile, "cannot open cassette " + path.string());
  ReplayGateway gw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Io, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    std::string fp = record.at("fingerprint").get<std::string>();
    auto& slot = gw.slots_[fp];
    if (!slot) {
      slot = std::make_unique<Slot>();
    } else if (strict) {
      throw Error(ErrorKind::Io, "duplicate fingerprint in strict cassette: " + fp);
    }
    slot->responses.push_back(response_from_json(record.at("response")));
    ++gw.entry_count_;
  }
  return gw;
}

ChatResponse ReplayGateway::complete(const ChatRequest& request) {
  request.validate();
  std::string fp = fingerprint(request);
  auto it = slots_.find(fp);
  if (it == slots_.end()) {
    throw Error(ErrorKind::CassetteMiss, "no recorded response for model '" + request.model +
                                             "' fingerprint " + fp);
  }
  Slot& slot = *it->second;
  std::size_t i = slot.next.fetch_add(1, std::memory_order_relaxed);
  return slot.responses[std::min(i, slot.responses.size() - 1)];
}

// --- recording --------------------------------------------------------------

RecordingGateway::RecordingGateway(std::shared_ptr<Gateway> inner, std::filesystem::path path)
    : inner_(std::move(inner)), path_(std::move(path)) {}

ChatResponse RecordingGateway::complete(const ChatRequest& request) {
  ChatResponse response = inner_->complete(request);
  std::lock_guard lock(mutex_);
  entries_.push_back({fingerprint(request), request.model, response});
  return response;
}

void RecordingGateway::save() const {
  std::vector<Entry> sorted;
  {
    std::lock_guard lock(mutex_);
    sorted = entries_;
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Entry& a, const Entry& b) { return a.fingerprint < b.fingerprint; });
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write cassette " + path_.string());
  for (const auto& e : sorted) {
    json record = {{"fingerprint", e.fingerprint},
                   {"model", e.model},
                   {"response", response_to_json(e.response)}};
    out << record.dump() << '\n';
  }
}

std::size_t RecordingGateway::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

// --- scripted ---------------------------------------------------------------

ChatResponse ScriptedGateway::complete(const ChatRequest& request) {
  request.validate();
  ChatResponse r;
  r.content = script_(request);
  return r;
}

}  // namespace tabqa::llm
