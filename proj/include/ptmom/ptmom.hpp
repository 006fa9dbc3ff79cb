#pragma once

// Umbrella header.

#include "ptmom/bounds3d.hpp"
#include "ptmom/moments.hpp"
#include "ptmom/oracle.hpp"
#include "ptmom/polyroots.hpp"
#include "ptmom/qstate.hpp"
#include "ptmom/region2d.hpp"
#include "ptmom/srange.hpp"
