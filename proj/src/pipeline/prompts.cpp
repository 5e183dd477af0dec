#include "caif/pipeline/prompts.hpp"

#include "caif/util/files.hpp"

namespace caif::pipeline {

std::string_view to_string(PromptKind kind) {
    switch (kind) {
        case PromptKind::Profiling:  return "profiling";
        case PromptKind::Evaluation: return "evaluation";
        case PromptKind::Refinement: return "refinement";
    }
    return "?";
}

std::string render_template(std::string_view text, const PromptContext& context) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto open = text.find("{{", pos);
        if (open == std::string_view::npos) {
            out.append(text.substr(pos));
            break;
        }
        const auto close = text.find("}}", open + 2);
        if (close == std::string_view::npos) {
            out.append(text.substr(pos));
            break;
        }
        out.append(text.substr(pos, open - pos));
        std::string_view name = text.substr(open + 2, close - open - 2);
        while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
        while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
        auto it = context.find(name);
        if (it == context.end()) throw MissingTemplateVariable(std::string(name));
        out.append(it->second);
        pos = close + 2;
    }
    return out;
}

PromptLibrary PromptLibrary::load(const std::filesystem::path& dir) {
    PromptLibrary lib;
    for (PromptKind kind : {PromptKind::Profiling, PromptKind::Evaluation, PromptKind::Refinement}) {
        lib.set(kind, read_text_file(dir / (std::string(to_string(kind)) + ".txt")));
    }
    return lib;
}

const std::string& PromptLibrary::raw(PromptKind kind) const {
    auto it = templates_.find(kind);
    if (it == templates_.end()) {
        throw std::out_of_range("no " + std::string(to_string(kind)) + " prompt template loaded");
    }
    return it->second;
}

std::string PromptLibrary::render(PromptKind kind, const PromptContext& context) const {
    return render_template(raw(kind), context);
}

std::string render_conversation(const Conversation& conversation) {
    std::string out;
    for (std::size_t i = 0; i < conversation.turns.size(); ++i) {
        const auto& t = conversation.turns[i];
        out += "[" + std::to_string(i) + "] " + std::string(to_string(t.speaker)) + ": " + t.text + "\n";
    }
    return out;
}

}  // namespace caif::pipeline
