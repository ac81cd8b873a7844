# **************************************************************************************************************
#
#  Copyright 2020-2023 Robert Bosch GmbH
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
#
# **************************************************************************************************************
#
# CRepositoryConfig.py
#
# Purpose:
# - Compute and store all repository specific information, like the repository name,
#   the package name and the paths of previous build outputs
#
# - All paths depend on the repository root path that has to be provided
#   to constructor of CRepositoryConfig
#
# --------------------------------------------------------------------------------------------------------------

import os, sys, platform, json
import colorama as col

from EquiWeight.version import VERSION
from EquiWeight.version import VERSION_DATE

col.init(autoreset=True)
COLBR = col.Style.BRIGHT + col.Fore.RED
COLBG = col.Style.BRIGHT + col.Fore.GREEN

# --------------------------------------------------------------------------------------------------------------

def printerror(sMsg):
    sys.stderr.write(COLBR + f"Error: {sMsg}!\n")

# --------------------------------------------------------------------------------------------------------------

class CRepositoryConfig():

    def __init__(self, sCalledBy=None):

        if sCalledBy is None:
            raise Exception("CRepositoryConfig needs the path of the calling script")
        sCalledBy = os.path.normpath(os.path.abspath(sCalledBy))
        self.__sReferencePath = os.path.dirname(sCalledBy)

        # load static configuration values (name of json file is fix)
        sRepositoryConfigurationFile = os.path.join(self.__sReferencePath, "config", "repository_config.json")
        with open(sRepositoryConfigurationFile, encoding="utf-8") as hRepositoryConfigurationFile:
            self.__dictRepositoryConfig = json.load(hRepositoryConfigurationFile)

        self.__dictRepositoryConfig['CALLEDBY']                    = sCalledBy
        self.__dictRepositoryConfig['CWD']                         = os.getcwd()
        self.__dictRepositoryConfig['REFERENCEPATH']               = self.__sReferencePath
        self.__dictRepositoryConfig['REPOSITORYCONFIGURATIONFILE'] = sRepositoryConfigurationFile

        # add version and date of the package this repository configuration belongs to
        self.__dictRepositoryConfig['PACKAGEVERSION'] = VERSION
        self.__dictRepositoryConfig['PACKAGEDATE']    = VERSION_DATE

        self.__InitConfig()
        print(COLBG + "Repository setup done")
        print()


    def __InitConfig(self):

        sPackageName = self.__dictRepositoryConfig['PACKAGENAME']

        self.__dictRepositoryConfig['PLATFORMSYSTEM'] = platform.system()
        self.__dictRepositoryConfig['PYTHON']         = os.path.normpath(sys.executable)
        self.__dictRepositoryConfig['PYTHONVERSION']  = sys.version

        self.__dictRepositoryConfig['README_MD']           = os.path.join(self.__sReferencePath, "README.md")
        self.__dictRepositoryConfig['PACKAGESOURCEFOLDER'] = os.path.join(self.__sReferencePath, sPackageName)

        self.__dictRepositoryConfig['SETUPBUILDFOLDER'] = os.path.join(self.__sReferencePath, "build")
        self.__dictRepositoryConfig['SETUPDISTFOLDER']  = os.path.join(self.__sReferencePath, "dist")
        self.__dictRepositoryConfig['EGGINFOFOLDER']    = os.path.join(self.__sReferencePath, f"{sPackageName.replace('-', '_')}.egg-info")

    # eof def __InitConfig(self):


    def PrintConfig(self):
        # -- printing configuration to console
        nJust = 30
        print()
        for sKey in self.__dictRepositoryConfig:
            print(sKey.rjust(nJust, ' ') + " : " + str(self.__dictRepositoryConfig[sKey]))
        print()
    # eof def PrintConfig(self):


    def Get(self, sName=None):
        if ( (sName is None) or (sName not in self.__dictRepositoryConfig) ):
            print()
            printerror(f"Configuration parameter '{sName}' not existing")
            print("Use instead one of:")
            self.PrintConfig()
            return None
        return self.__dictRepositoryConfig[sName]
    # eof def Get(self, sName=None):


    def GetConfig(self):
       return self.__dictRepositoryConfig
    # eof def GetConfig(self):

# eof class CRepositoryConfig():

# --------------------------------------------------------------------------------------------------------------
