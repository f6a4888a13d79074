from setuptools import find_packages, setup

setup(name='group_lmb',
      version='0.1.0',
      description='augmented labeled multi-Bernoulli filter for group target tracking',
      license='MIT',
      packages=find_packages(exclude=['tests', 'tests.*']),
      package_data={'group_lmb.sim': ['default_scenario.yaml']},
      python_requires='>=3.9',
      install_requires=['numpy', 'scipy', 'qcodes', 'pyyaml', 'pandas'],
      extras_require={'test': ['pytest', 'hypothesis']},
      entry_points={'console_scripts': ['group-lmb=group_lmb.cli:main']},
      zip_safe=False)
