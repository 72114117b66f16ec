#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "gat/errors.hpp"

namespace gat {

// Versioned prompt templates. The texts below are the single source of
// truth; the files under assets/prompts/v1/ mirror them byte for byte and
// golden-file tests hold the two in sync. Note the deliberate trailing
// space after "Answer:" in the QA and verification templates and its
// absence in the classification template.
inline constexpr std::string_view kDefaultQaTemplateId = "default_qa@v1";
inline constexpr std::string_view kNlvTemplateId = "nlv@v1";
inline constexpr std::string_view kAgnewsTemplateId = "agnews@v1";

inline constexpr std::string_view kDefaultQaTemplate =
    "Context: <insert-context>\n"
    "Question: <insert-question>\n"
    "Choices: { A. <insert-option1>, B. <insert-option2>, ... }\n"
    "Answer: ";

inline constexpr std::string_view kNlvTemplate =
    "Context: <insert-context>\n"
    "Statement: <insert-statement>\n"
    "Is the claim supported by the given context? Return only the option "
    "corresponding to the correct choice.\n"
    "Choices: { A. true, B. false }\n"
    "Answer: ";

inline constexpr std::string_view kAgnewsTemplate =
    "User: Please help me perform a news classification task. I will give "
    "you a news title and the corresponding description. You should classify "
    "the news into the categories of \"World\", \"Sports\", \"Business\", "
    "and \"Technology\". You are only allowed to give me a word, selecting "
    "from these four categories.\n"
    "Context: <insert-context>\n"
    "Category: { A. World, B. Sports, C. Business, D. Technology }\n"
    "Answer:";

namespace detail {

inline std::string replace_all(std::string text, std::string_view needle,
                               std::string_view value) {
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    text.replace(pos, needle.size(), value);
    pos += value.size();
  }
  return text;
}

}  // namespace detail

// Options lettered A, B, C, ... in input order: "A. first, B. second".
inline std::string lettered_choices(const std::vector<std::string>& options) {
  if (options.size() < 2)
    fail(Errc::TooFewOptions, "prompt needs at least 2 options");
  if (options.size() > 26)
    fail(Errc::ValidationError, "more options than letters");
  std::string out;
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (i) out += ", ";
    out += static_cast<char>('A' + i);
    out += ". ";
    out += options[i];
  }
  return out;
}

inline std::string build_default_qa_prompt(
    const std::string& context, const std::string& question,
    const std::vector<std::string>& options) {
  std::string text = detail::replace_all(
      std::string(kDefaultQaTemplate),
      "{ A. <insert-option1>, B. <insert-option2>, ... }",
      "{ " + lettered_choices(options) + " }");
  text = detail::replace_all(std::move(text), "<insert-context>", context);
  return detail::replace_all(std::move(text), "<insert-question>", question);
}

// The binary verification prompt; its two answer options are always
// {true, false}, lettered A and B.
inline std::string build_nlv_prompt(const std::string& context,
                                    const std::string& statement) {
  if (statement.empty()) fail(Errc::ValidationError, "empty statement");
  std::string text =
      detail::replace_all(std::string(kNlvTemplate), "<insert-context>",
                          context);
  return detail::replace_all(std::move(text), "<insert-statement>", statement);
}

inline std::string build_agnews_prompt(const std::string& context) {
  return detail::replace_all(std::string(kAgnewsTemplate), "<insert-context>",
                             context);
}

// Deterministic statement renderer used when no reformatting model is
// configured: merges a question and a chosen option into one declarative
// claim. Keeps the whole adaptation pipeline runnable offline.
inline std::string fallback_statement(const std::string& question,
                                      const std::string& option) {
  if (question.empty() || option.empty())
    fail(Errc::ValidationError, "question and option must be nonempty");
  return "The answer to the question \"" + question + "\" is: " + option;
}

}  // namespace gat
