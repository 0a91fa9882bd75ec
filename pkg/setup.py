import os

from setuptools import find_packages, setup

_here = os.path.dirname(os.path.realpath(__file__))


def _read(*parts, **kwargs):
    """ Returns the stripped contents of a file under the project root, or default. """
    path = os.path.join(_here, *parts)
    if not os.path.exists(path):
        return kwargs.get("default", "")
    with open(path) as f:
        return f.read().strip()


setup(name="biasedcube",
      description="Fourier analysis and FKN-type checks for functions on the biased discrete cube",
      long_description=_read("README.md"),
      long_description_content_type="text/markdown",
      # VERSION is written by the release build
      version=_read("biasedcube", "VERSION", default="1.0.0.dev0"),
      packages=find_packages(),
      install_requires=['numpy>=1.17'],
      extras_require={'test': ['mock']},
      python_requires=">=3.6",
      package_data={'biasedcube': ['VERSION', 'tests/*.txt']},
      entry_points={
        "console_scripts": ["biased-cube=biasedcube.cli:main"]},
      license="MIT",
      classifiers=[
        "Intended Audience :: Science/Research",
        "Intended Audience :: Developers",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Topic :: Scientific/Engineering",
        "Topic :: Scientific/Engineering :: Mathematics"]
      )
