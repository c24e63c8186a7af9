#include "onto/error.hpp"

namespace onto {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::UnsupportedScheme: return "UnsupportedScheme";
    case Errc::Malformed: return "Malformed";
    case Errc::Timeout: return "Timeout";
    case Errc::ConnectionFailed: return "ConnectionFailed";
    case Errc::TooManyRedirects: return "TooManyRedirects";
    case Errc::BodyTooLarge: return "BodyTooLarge";
    case Errc::OutputUnwritable: return "OutputUnwritable";
    case Errc::AllSeedsInvalid: return "AllSeedsInvalid";
    case Errc::XmlMalformed: return "XmlMalformed";
    case Errc::UnsupportedConstruct: return "UnsupportedConstruct";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UndefinedPrefix: return "UndefinedPrefix";
    case Errc::InputUnreadable: return "InputUnreadable";
    case Errc::IndexDirUnwritable: return "IndexDirUnwritable";
    case Errc::MissingFile: return "MissingFile";
    case Errc::CorruptIndex: return "CorruptIndex";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::EmptyQuery: return "EmptyQuery";
    case Errc::UnknownUrl: return "UnknownUrl";
    case Errc::SpecInvalid: return "SpecInvalid";
    case Errc::PathUnreadable: return "PathUnreadable";
  }
  return "Unknown";
}

}  // namespace onto
