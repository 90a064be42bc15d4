#pragma once

#include <string>
#include <vector>

#include "brickvm/model/project.hpp"
#include "brickvm/support/bytes.hpp"
#include "brickvm/support/xml.hpp"

namespace brickvm::model {

/// Reads and validates a zipped project (code.xml + images/ + sounds/).
/// Throws ProjectError; non-fatal diagnostics are appended to `notes`.
Project load_project(ByteView archive, std::vector<std::string>* notes = nullptr);

/// Canonical archive: equal projects always give byte-identical output.
Bytes save_project(const Project& project);

/// The code.xml document of a project, and the inverse (no validation).
xml::Element to_xml(const Project& project);
Project from_xml(const xml::Element& root);

/// Canonical code.xml text of one object; used for content fingerprints.
std::string canonical_object_xml(const SpriteObject& object);

}  // namespace brickvm::model
