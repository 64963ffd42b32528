#include "taletorium/error.hpp"

namespace taletorium {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
    case Errc::Parse: return "Parse";
    case Errc::NoKeywords: return "NoKeywords";
    case Errc::NoCharacters: return "NoCharacters";
    case Errc::ModelMissing: return "ModelMissing";
    case Errc::TemplatesMissing: return "TemplatesMissing";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::PaletteMissing: return "PaletteMissing";
    case Errc::UnknownEntity: return "UnknownEntity";
    case Errc::EmbeddingUnavailable: return "EmbeddingUnavailable";
    case Errc::VocabMissing: return "VocabMissing";
    case Errc::DegenerateBox: return "DegenerateBox";
    case Errc::TemplateBankError: return "TemplateBankError";
    case Errc::MissingTemplate: return "MissingTemplate";
    case Errc::DegenerateSketch: return "DegenerateSketch";
    case Errc::BadRequest: return "BadRequest";
    case Errc::NotFound: return "NotFound";
    case Errc::StoryFinished: return "StoryFinished";
    case Errc::CastFull: return "CastFull";
  }
  return "Unknown";
}

}  // namespace taletorium
