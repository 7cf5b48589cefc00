"""Frozen reference values for the three case-study drawings.

Transcribed by hand from the published worked examples, not produced by this
package, so they act as independent oracles. The one deliberate change is the
fourth top bar: the worked example records x = 13 in an intermediate step but
x = 11 in the final JSON, and 11 is what the spacing formula gives.
"""

RC_DESCRIPTION = (
    "I would like to draw a 24x14in RC cross-section with No 4 closed stirrups at 5 in. "
    "It needs three rebar layers. The top and bottom layer will have 4 No 8 and 2 No 4, "
    "respectively. The middle layer will have 2 No 4. Consider a 2in clear cover."
)
STEEL_DESCRIPTION = "I would like to draw W1100X390"
PRECAST_DESCRIPTION = "I want to draw an I type I-Beam with four strands."

RC_FIELDS = """\
- Type of Structure: rectangular concrete beam cross-section
- Height of cross-section: 24in
- Width of cross-section: 14in
- Number of rebars: 3 layers
- Rebar information:
    - Top layer: 4 No 8
    - Middle layer: 2 No 4
    - Bottom layer: 2 No 4
- Stirrup information: No 4
- Thickness of clear cover: 2in
"""
STEEL_FIELDS = """\
- Type of Structure: steel beam cross-section
- Steel Beam Cross-section: W1100X390
"""
PRECAST_FIELDS = """\
- Type of Structure: I-beam type I
- Position: Bottom Left Vertex: (0, 0)
- Number of Strands: 4
"""

VERTICES = [(0, 0), (0, 24), (14, 24), (14, 0)]
SIDES = [((0, 0), (0, 24)), ((0, 24), (14, 24)), ((14, 24), (14, 0)), ((14, 0), (0, 0))]
REBAR_CENTERS = [
    (3, 21), (5.6667, 21), (8.3333, 21), (11, 21),
    (2.75, 11.875), (11.25, 11.875), (2.75, 2.75), (11.25, 2.75),
]
REBAR_RADII = [0.5, 0.5, 0.5, 0.5, 0.25, 0.25, 0.25, 0.25]
STIRRUP = (0.25, 0.5)
L = [
    ((2.5, 21), (2.5, 2.75)),
    ((3.9142, 21.5), (11, 21.5)),
    ((11.5, 21), (11.5, 2.75)),
    ((2.75, 2.5), (11.25, 2.5)),
    ((2, 21), (2, 2.75)),
    ((3, 22), (11, 22)),
    ((12, 21), (12, 2.75)),
    ((2.75, 2), (11.25, 2)),
]
A = [
    (3, 21, 1, 45, 180),
    (11, 21, 1, 0, 90),
    (11.25, 2.75, 0.75, 270, 0),
    (2.75, 2.75, 0.75, 180, 270),
]
LH = [
    ((3.7071, 21.7071), (5.8284, 19.5858)),
    ((3.3536, 21.3536), (5.4749, 19.2322)),
    ((5.8284, 19.5858), (5.4749, 19.2322)),
    ((2.6464, 20.6464), (4.7678, 18.5251)),
    ((2.5, 20.0858), (4.4142, 18.1716)),
    ((4.7678, 18.5251), (4.4142, 18.1716)),
]
HOOK_LENGTH = 3.0

PRECAST_STRANDS = [(3, 2), (5, 2), (7, 2), (9, 2)]
STRAND_RADIUS = 0.5

RC_JSON_X13 = """{
  "Save": false,
  "Unit": "Inch",
  "Type of Structural Drawing": "rectangular concrete beam cross-section",
  "Coordinates of Four Vertices": {
    "bottom left": [0, 0], "top left": [0, 24], "top right": [14, 24], "bottom right": [14, 0]
  },
  "End Point of Four Sides": {
    "left": {"end1": [0, 0], "end2": [0, 24]},
    "top": {"end1": [0, 24], "end2": [14, 24]},
    "right": {"end1": [14, 24], "end2": [14, 0]},
    "bottom": {"end1": [14, 0], "end2": [0, 0]}
  },
  "Center of Rebars": [[3, 21], [5.6667, 21], [8.3333, 21], [13, 21],
                       [2.75, 11.875], [11.25, 11.875], [2.75, 2.75], [11.25, 2.75]],
  "Radius of Rebars": [0.5, 0.5, 0.5, 0.5, 0.25, 0.25, 0.25, 0.25],
  "Radius and Diameter of Stirrup": [0.25, 0.5],
  "End Points of Internal and External Lines of Stirrup": {
    "L1": {"end1": [2.5, 21], "end2": [2.5, 2.75]},
    "L2": {"end1": [3.9142, 21.5], "end2": [11, 21.5]},
    "L3": {"end1": [11.5, 21], "end2": [11.5, 2.75]},
    "L4": {"end1": [2.75, 2.5], "end2": [11.25, 2.5]},
    "L5": {"end1": [2, 21], "end2": [2, 2.75]},
    "L6": {"end1": [3, 22], "end2": [11, 22]},
    "L7": {"end1": [12, 21], "end2": [12, 2.75]},
    "L8": {"end1": [2.75, 2], "end2": [11.25, 2]}
  },
  "Arc Lines of Stirrup": {
    "A1": [3, 21, 1, 45, 180], "A2": [11, 21, 1, 0, 90],
    "A3": [11.25, 2.75, 0.75, 270, 0], "A4": [2.75, 2.75, 0.75, 180, 270]
  },
  "Hook lines of Stirrup": {
    "Lh1": {"end1": [3.7071, 21.7071], "end2": [5.8284, 19.5858]},
    "Lh2": {"end1": [3.3536, 21.3536], "end2": [5.4749, 19.2322]},
    "Lh3": {"end1": [5.8284, 19.5858], "end2": [5.4749, 19.2322]},
    "Lh4": {"end1": [2.6464, 20.6464], "end2": [4.7678, 18.5251]},
    "Lh5": {"end1": [2.5, 20.0858], "end2": [4.4142, 18.1716]},
    "Lh6": {"end1": [4.7678, 18.5251], "end2": [4.4142, 18.1716]}
  }
}"""
RC_JSON = RC_JSON_X13.replace("[13, 21]", "[11, 21]")

SCHEDULE = "1=0.98,2=1.0,3-1=0.85,3-2=0.77,3-3=0.81,4=1.0,5=0.95,6=0.83"
SCHEDULE_RATES = {
    "1": 0.98, "2": 1.0, "3-1": 0.85, "3-2": 0.77, "3-3": 0.81, "4": 1.0, "5": 0.95, "6": 0.83,
}
