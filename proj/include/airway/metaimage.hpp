#pragma once

#include <stdexcept>
#include <string>

#include "airway/volume.hpp"

namespace airway {

// I/O failures that map to "file not found"-class CLI errors.
struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class MetaElementType { Short, Float, Uchar };

// Minimal MetaImage dialect: text header with ObjectType/NDims/DimSize/
// ElementSpacing/Offset/ElementType/ElementByteOrderMSB/ElementDataFile,
// raw payload x-fastest. Unknown keys are ignored on read and never written.
// A ".mha" path stores the payload inline (ElementDataFile = LOCAL); any
// other extension writes a sibling ".raw".
ScalarVolume load_volume(const std::string& path);
void save_volume(const ScalarVolume& v, const std::string& path,
                 MetaElementType type = MetaElementType::Float);

// Masks are stored as 8-bit {0,1}.
BinaryMask load_mask(const std::string& path);
void save_mask(const BinaryMask& m, const std::string& path);

}  // namespace airway
