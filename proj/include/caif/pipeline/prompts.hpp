#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

#include "caif/pipeline/intent.hpp"

namespace caif::pipeline {

enum class PromptKind { Profiling, Evaluation, Refinement };

std::string_view to_string(PromptKind kind);

class MissingTemplateVariable : public std::runtime_error {
public:
    explicit MissingTemplateVariable(const std::string& name)
        : std::runtime_error("prompt template variable not supplied: " + name), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

using PromptContext = std::map<std::string, std::string, std::less<>>;

// Replaces every {{name}} with context[name]; throws on an absent name.
std::string render_template(std::string_view text, const PromptContext& context);

// The three prompt templates, loaded from profiling.txt, evaluation.txt and
// refinement.txt in one directory.
class PromptLibrary {
public:
    static PromptLibrary load(const std::filesystem::path& dir);

    void set(PromptKind kind, std::string text) { templates_[kind] = std::move(text); }
    const std::string& raw(PromptKind kind) const;
    std::string render(PromptKind kind, const PromptContext& context) const;

private:
    std::map<PromptKind, std::string> templates_;
};

// Turn history as "[index] Speaker: text" lines.
std::string render_conversation(const Conversation& conversation);

}  // namespace caif::pipeline
