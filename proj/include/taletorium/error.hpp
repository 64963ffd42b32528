#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace taletorium {

enum class Errc {
  InvalidArgument,
  Io,
  Parse,
  NoKeywords,
  NoCharacters,
  ModelMissing,
  TemplatesMissing,
  EmptyCorpus,
  PaletteMissing,
  UnknownEntity,
  EmbeddingUnavailable,
  VocabMissing,
  DegenerateBox,
  TemplateBankError,
  MissingTemplate,
  DegenerateSketch,
  BadRequest,
  NotFound,
  StoryFinished,
  CastFull,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace taletorium
