#pragma once

#include <stdexcept>
#include <string>

namespace ct2stl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- DICOM / image input ---
struct DicomError : Error { using Error::Error; };
struct MissingTag : DicomError { using DicomError::DicomError; };
struct UnsupportedTransferSyntax : DicomError { using DicomError::DicomError; };
struct LengthMismatch : DicomError { using DicomError::DicomError; };
struct TruncatedFile : DicomError { using DicomError::DicomError; };
struct InvalidTagValue : DicomError { using DicomError::DicomError; };

struct PgmError : Error { using Error::Error; };
struct MalformedHeader : PgmError { using PgmError::PgmError; };
struct TruncatedPixelData : PgmError { using PgmError::PgmError; };

// --- image processing ---
struct InvalidWindow : Error { using Error::Error; };
struct InvalidParam : Error { using Error::Error; };
struct InvalidKernel : Error { using Error::Error; };

// --- contours ---
struct TooFewPoints : Error { using Error::Error; };
struct DegenerateContour : Error { using Error::Error; };
struct InvalidSpan : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };

// --- meshing ---
struct AllCollinear : Error { using Error::Error; };
struct DuplicatePoints : Error { using Error::Error; };
struct DegenerateLayer : Error { using Error::Error; };
struct LayerMismatch : Error { using Error::Error; };

// --- STL / point files ---
struct MalformedStl : Error { using Error::Error; };
struct TooManyFacets : Error { using Error::Error; };
struct MalformedPointFile : Error { using Error::Error; };

}  // namespace ct2stl
