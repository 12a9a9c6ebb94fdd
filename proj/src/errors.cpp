#include "birkhoff/errors.hpp"

namespace birkhoff {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::range: return "range";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::indexing: return "indexing";
    case ErrorKind::boundary: return "boundary";
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::quadrature: return "quadrature";
    case ErrorKind::spectrum: return "spectrum";
    case ErrorKind::threshold: return "threshold";
    case ErrorKind::conditioning: return "conditioning";
    case ErrorKind::undefined_node: return "undefined_node";
  }
  return "unknown";
}

}  // namespace birkhoff
