#ifndef FSILAB_FSILAB_HPP
#define FSILAB_FSILAB_HPP

#include "fsilab/config.hpp"
#include "fsilab/csv.hpp"
#include "fsilab/linalg.hpp"
#include "fsilab/modal.hpp"
#include "fsilab/oracle.hpp"
#include "fsilab/params.hpp"
#include "fsilab/pressure.hpp"
#include "fsilab/schemes.hpp"
#include "fsilab/spectral.hpp"
#include "fsilab/stability.hpp"

#endif
