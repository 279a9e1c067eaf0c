#include <pybind11/pybind11.h>
PYBIND11_MODULE(_uentropy, m) { m.doc() = "placeholder"; }
