"""Workbench for p-local structure of groups at desk scale.

Subpackages cover finite group arithmetic (groups), fusion systems
(fusion), mod-p cohomology and stable elements (cohomology), transporter
and linking categories (linking), and colimit towers of finite groups
(towers).  The command line lives in cli.
"""

__version__ = "0.1.0"
