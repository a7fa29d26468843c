import os

from setuptools import setup


def get_version():
    with open("setgame/version.py", "rt") as f:
        return f.readline().split("=")[1].strip(' "\n')


cur_dir = os.path.abspath(os.path.dirname(__file__))

setup(
    name='setgame',
    version=get_version(),
    description='The membership game on hereditarily finite and '
                'non-well-founded sets',
    long_description=open(os.path.join(cur_dir, 'README.rst')).read(),
    license='MIT',
    python_requires='>=3.8',
    tests_require=['pytest'],
    install_requires=[
        'networkx (>=2.5)',
        'Pillow (>=10.0.0)',
    ],
    packages=[
        'setgame',
    ],
    entry_points={
        'console_scripts': [
            'setgame = setgame.cli:main',
        ],
    },
    include_package_data=True,
    keywords=['set theory', 'game', 'hereditarily finite', 'bisimulation'],
    classifiers=[
        'Development Status :: 4 - Beta',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
)
