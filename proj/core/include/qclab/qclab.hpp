#pragma once

#include "qclab/apset.hpp"
#include "qclab/diffraction.hpp"
#include "qclab/error.hpp"
#include "qclab/io.hpp"
#include "qclab/reconstruct.hpp"
#include "qclab/wiener.hpp"
#include "qclab/zeros.hpp"
