// Stand-in for the sandbox runner, speaking the same stdio protocol.
// Behaviour per script comes from the JSON file named by
// TABQA_FAKE_SANDBOX_BOOK: {"<code>": {"result": <answer>} | {"error": "..."} |
// {"hang": true} | {"hang_with_child": true, "pid_file"?: path} | {"exit": n} | {"raw": "..."} |
// {"wrong_id": true}}. Unknown code answers with a NameError.

#include <sys/types.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

#include "tabqa/exact_json.hpp"
#include "tabqa/script/sandbox_client.hpp"

using namespace tabqa;

int main() {
  std::string line;
  if (!std::getline(std::cin, line)) return 3;
  script::SandboxRequest req = script::request_from_json(line);

  nlohmann::json book = nlohmann::json::object();
  if (const char* path = std::getenv("TABQA_FAKE_SANDBOX_BOOK")) {
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    book = json_exact::parse(text);
  }
  script::SandboxResponse resp;
  resp.id = req.id;
  if (!std::ifstream(req.table_csv_path)) {
    resp.status = script::SandboxStatus::Error;
    resp.error_text = "FileNotFoundError: " + req.table_csv_path.string();
  } else if (!book.contains(req.code)) {
    resp.status = script::SandboxStatus::Error;
    resp.error_text = "Traceback (most recent call last):\nNameError: unknown script";
  } else {
    const auto& b = book[req.code];
    if (b.contains("hang_with_child")) {
      pid_t child = fork();
      if (child == 0) {
        for (;;) pause();
      }
      if (b.contains("pid_file")) std::ofstream(b["pid_file"].get<std::string>()) << getpid() << " " << child << "\n";
      for (;;) pause();
    }
    if (b.contains("hang")) {
      for (;;) pause();
    }
    if (b.contains("exit")) return b["exit"].get<int>();
    if (b.contains("raw")) {
      std::cout << b["raw"].get<std::string>() << "\n";
      return 0;
    }
    if (b.contains("wrong_id")) resp.id = req.id + "-other";
    if (b.contains("result")) {
      resp.status = script::SandboxStatus::Ok;
      resp.result = answer_from_json(b["result"]);
    } else {
      resp.status = script::SandboxStatus::Error;
      resp.error_text = b.value("error", std::string("error"));
    }
  }
  resp.duration_ms = 1;
  std::cout << script::response_to_json(resp) << "\n";
  return 0;
}
